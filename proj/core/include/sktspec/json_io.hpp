#pragma once

#include "sktspec/conditions.hpp"
#include "sktspec/galerkin.hpp"
#include "sktspec/integrate.hpp"
#include "sktspec/lyapunov.hpp"
#include "sktspec/model.hpp"
#include "sktspec/sweep.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace skt {

using Json = nlohmann::ordered_json;

/// Malformed input; `key()` names the offending key when there is one.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string key, const std::string& what) : std::runtime_error(what), key_(std::move(key)) {}
  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Flat object with exactly the 14 canonical keys, all numbers.
/// Does not run validate(); callers decide which invariants apply.
ModelParams params_from_json(const Json& j);
ModelParams load_params(const std::filesystem::path& path);
Json to_json(const ModelParams& p);

Json to_json(const Inequality& q);
Json to_json(const ConditionReport& r);
Json to_json(const LyapunovCert& c);
Json to_json(const CertificateSearch& s);
Json to_json(const SignReport& s);
Json to_json(const Diagnostics& d);
Json to_json(const RunConfig& c);
Json to_json(const InitialDescriptor& ic);

std::string_view to_string(CertificateStatus status);

InitialDescriptor descriptor_from_json(const Json& j);

struct InitialPair {
  InitialDescriptor u;
  InitialDescriptor v;
};

/// Accepted forms:
///   constant:U,V                       constant fields
///   A | B | C                          a built-in shape for both species
///   SHAPE;SHAPE                        separate shapes for u and v, where SHAPE is
///                                      A, B, C, constant:c, cosine:offset,j,k,amp[,j,k,amp...]
///                                      or gaussian:cx,cy,sigma,amp,offset
///   cosine:... | gaussian:...          the same shape for both species
///   {"u": {...}, "v": {...}}           JSON descriptors
///   @path                              a file holding the JSON form
InitialPair parse_initial(std::string_view text);

Json to_json(const InitialPair& ic);

/// Header "t=<t> n=<n> grid=<N>", then N rows (y index) of N values (x index).
void write_snapshot(const std::filesystem::path& path, const Field& field, double t, int n);

struct Snapshot {
  double t = 0.0;
  int n = 0;
  Field field;
};

Snapshot read_snapshot(const std::filesystem::path& path);

/// Writes <out>/u_NNNN.txt, v_NNNN.txt per recorded time and returns the
/// manifest (also written to <out>/manifest.json).
Json write_run(const std::filesystem::path& out, const ModelParams& params, const RunConfig& config,
               const InitialPair& ic, const RunResult& result);

/// Manifest without touching the filesystem; snapshot entries list the file names write_run uses.
Json run_manifest(const ModelParams& params, const RunConfig& config, const InitialPair& ic,
                  const RunResult& result);

/// Deterministic text form: two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace skt
