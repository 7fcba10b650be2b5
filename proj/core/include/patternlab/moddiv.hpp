#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace patternlab {

/// a / b = c over Z_p, i.e. c * b = a (mod p) with b != 0.
struct ModDivExample {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t c = 0;
  friend bool operator==(const ModDivExample&, const ModDivExample&) = default;
};

enum class Split { train, test, all };
/// Throws ValidationError (field `split`).
Split parse_split(std::string_view text);

struct ModDivDataset {
  std::uint32_t p = 97;
  std::vector<ModDivExample> examples;  ///< ordered by (a, b)
  std::vector<bool> in_train;           ///< parallel to examples
  double train_fraction = 0.5;
  std::uint64_t seed = 0;

  std::size_t vocab_size() const noexcept { return p + 2; }
  std::uint32_t op_id() const noexcept { return p; }
  std::uint32_t eq_id() const noexcept { return p + 1; }

  friend bool operator==(const ModDivDataset&, const ModDivDataset&) = default;
};

/// Largest modulus generate() accepts; bounds the dataset to ~67M rows.
inline constexpr std::uint32_t kMaxModulus = 8191;

bool is_prime(std::uint64_t n);

/// All p(p-1) triples, shuffled with the seed; the first
/// floor(train_fraction * total) shuffled rows form the training split.
/// Throws ValidationError (fields `p`, `train_fraction`).
ModDivDataset generate(std::uint32_t p, double train_fraction, std::uint64_t seed);

struct ZeroDividendStats {
  std::size_t total = 0;
  std::size_t in_train = 0;
  std::size_t in_test = 0;
};

ZeroDividendStats zero_dividend_stats(const ModDivDataset& dataset);

/// Expected accuracy of the rule "answer 0 when a = 0, otherwise guess a
/// residue uniformly": (z p + (N - z)) / (N p) for z zero-dividend rows out
/// of N in the split. Throws ValidationError (field `split`) if empty.
double predicted_peak_accuracy(const ModDivDataset& dataset, Split split);

/// `<a> <op> <b> <eq> <c>` as decimal token ids.
std::string token_line(const ModDivExample& example, std::uint32_t p);

/// Writes one token line per example to `tokens` and the sidecar JSON to
/// `tokens` + ".json". Both writes are atomic.
void export_tokens(const ModDivDataset& dataset, const std::filesystem::path& tokens);

/// Inverse of export_tokens. Throws ValidationError on inconsistent files.
ModDivDataset import_tokens(const std::filesystem::path& tokens);

std::filesystem::path sidecar_path(const std::filesystem::path& tokens);

}  // namespace patternlab
