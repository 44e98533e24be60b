#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jlanczos/linalg.hpp"
#include "jlanczos/trlan.hpp"

namespace jlanczos {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Contents of the JSON sidecar written next to a Matrix Market file.
struct MatrixMeta {
  std::string source;                     // "random-hjs", "tek" or "external"
  std::string j_realization;              // "canonical-block", "spin-tensor" or "" when unknown
  std::optional<std::uint64_t> seed;
  std::vector<double> planted;            // random-hjs only
  std::optional<std::size_t> colour_dim;  // tek only
  std::optional<double> kappa;            // tek only
};

/// Dense matrices use the array format ("array complex general"), column-major,
/// one "re im" pair per line at 17 significant digits.
void write_matrix_market(const std::filesystem::path &path, const DenseComplexMatrix &a);
/// Reads array-format real or complex general matrices.
DenseComplexMatrix read_matrix_market(const std::filesystem::path &path);
DenseComplexMatrix read_matrix_market(std::istream &in);

/// Sidecar path: "<path>.meta.json".
std::filesystem::path sidecar_path(const std::filesystem::path &matrix_path);
void write_sidecar(const std::filesystem::path &matrix_path, const MatrixMeta &meta);
/// Returns nullopt when no sidecar exists.
std::optional<MatrixMeta> read_sidecar(const std::filesystem::path &matrix_path);

inline constexpr const char *kConvergenceCsvHeader =
    "restart,cum_matvec,target_index,eig_estimate,res_estimate,res_true,converged";

/// One row per (restart, target); res_true is empty when it was not computed;
/// converged is 1 or 0. Target indices are 1-based.
void write_convergence_csv(std::ostream &out, const std::vector<ConvergenceRecord> &records);
void emit_convergence_csv(const std::vector<ConvergenceRecord> &records, const std::filesystem::path &path);

std::vector<ConvergenceRecord> parse_convergence_csv(std::istream &in);
std::vector<ConvergenceRecord> parse_convergence_csv(const std::filesystem::path &path);

/// %.17g formatting, which round-trips every double.
std::string format_double(double x);

} // namespace jlanczos
