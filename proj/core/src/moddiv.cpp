#include "patternlab/moddiv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "patternlab/errors.hpp"
#include "patternlab/serialize.hpp"
#include "random.hpp"

namespace patternlab {
namespace {

std::uint32_t mul_mod(std::uint32_t x, std::uint32_t y, std::uint32_t p) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * y % p);
}

std::uint32_t pow_mod(std::uint32_t base, std::uint32_t exponent, std::uint32_t p) {
  std::uint32_t result = 1 % p;
  while (exponent > 0) {
    if (exponent & 1u) result = mul_mod(result, base, p);
    base = mul_mod(base, base, p);
    exponent >>= 1;
  }
  return result;
}

// Fermat inverse; p is prime and b != 0.
std::uint32_t inverse_mod(std::uint32_t b, std::uint32_t p) { return pow_mod(b, p - 2, p); }

bool in_split(const ModDivDataset& dataset, std::size_t i, Split split) {
  switch (split) {
    case Split::train: return dataset.in_train[i];
    case Split::test: return !dataset.in_train[i];
    case Split::all: return true;
  }
  return false;
}

std::uint32_t parse_token(std::string_view text, std::size_t line) {
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("tokens", "line " + std::to_string(line) + ": bad token '" +
                                        std::string(text) + "'");
  }
  return value;
}

}  // namespace

Split parse_split(std::string_view text) {
  if (text == "train") return Split::train;
  if (text == "test") return Split::test;
  if (text == "all") return Split::all;
  throw ValidationError("split", "expected train, test or all");
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

ModDivDataset generate(std::uint32_t p, double train_fraction, std::uint64_t seed) {
  if (!is_prime(p)) throw ValidationError("p", std::to_string(p) + " is not prime");
  if (p > kMaxModulus) {
    throw ValidationError("p", "must be at most " + std::to_string(kMaxModulus));
  }
  if (!std::isfinite(train_fraction) || train_fraction <= 0.0 || train_fraction >= 1.0) {
    throw ValidationError("train_fraction", "must be in (0, 1)");
  }

  ModDivDataset out;
  out.p = p;
  out.train_fraction = train_fraction;
  out.seed = seed;
  out.examples.reserve(static_cast<std::size_t>(p) * (p - 1));
  for (std::uint32_t a = 0; a < p; ++a) {
    for (std::uint32_t b = 1; b < p; ++b) {
      out.examples.push_back({a, b, mul_mod(a, inverse_mod(b, p), p)});
    }
  }

  const std::size_t total = out.examples.size();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = detail::stream_rng(seed, 0);
  for (std::size_t i = total; i > 1; --i) {
    std::swap(order[i - 1], order[detail::uniform_below(rng, i)]);
  }
  const auto train_count =
      static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(total)));
  out.in_train.assign(total, false);
  for (std::size_t k = 0; k < train_count; ++k) out.in_train[order[k]] = true;
  return out;
}

ZeroDividendStats zero_dividend_stats(const ModDivDataset& dataset) {
  ZeroDividendStats stats;
  for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
    if (dataset.examples[i].a != 0) continue;
    ++stats.total;
    if (dataset.in_train[i]) {
      ++stats.in_train;
    } else {
      ++stats.in_test;
    }
  }
  return stats;
}

double predicted_peak_accuracy(const ModDivDataset& dataset, Split split) {
  std::uint64_t size = 0;
  std::uint64_t zero = 0;
  for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
    if (!in_split(dataset, i, split)) continue;
    ++size;
    if (dataset.examples[i].a == 0) ++zero;
  }
  if (size == 0) throw ValidationError("split", "selected split is empty");
  // (z + (N - z) / p) / N over a common denominator, rounded once.
  const std::uint64_t correct = zero * dataset.p + (size - zero);
  return static_cast<double>(correct) / static_cast<double>(size * dataset.p);
}

std::string token_line(const ModDivExample& example, std::uint32_t p) {
  return std::to_string(example.a) + ' ' + std::to_string(p) + ' ' + std::to_string(example.b) +
         ' ' + std::to_string(p + 1) + ' ' + std::to_string(example.c);
}

std::filesystem::path sidecar_path(const std::filesystem::path& tokens) {
  std::filesystem::path out = tokens;
  out += ".json";
  return out;
}

void export_tokens(const ModDivDataset& dataset, const std::filesystem::path& tokens) {
  std::string body;
  body.reserve(dataset.examples.size() * 16);
  std::vector<std::size_t> train_indices;
  for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
    body += token_line(dataset.examples[i], dataset.p);
    body += '\n';
    if (dataset.in_train[i]) train_indices.push_back(i);
  }
  const nlohmann::json sidecar = {
      {"p", dataset.p},
      {"vocab_size", dataset.vocab_size()},
      {"op_id", dataset.op_id()},
      {"eq_id", dataset.eq_id()},
      {"train_fraction", dataset.train_fraction},
      {"seed", dataset.seed},
      {"answer_position", 4},
      {"sequence_length", 5},
      {"train_indices", train_indices},
  };
  write_file_atomic(tokens, body);
  write_file_atomic(sidecar_path(tokens), sidecar.dump(1) + "\n");
}

ModDivDataset import_tokens(const std::filesystem::path& tokens) {
  nlohmann::json sidecar;
  try {
    sidecar = nlohmann::json::parse(read_file(sidecar_path(tokens)));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("sidecar", e.what());
  }
  ModDivDataset out;
  std::vector<std::size_t> train_indices;
  try {
    out.p = sidecar.at("p").get<std::uint32_t>();
    out.train_fraction = sidecar.at("train_fraction").get<double>();
    out.seed = sidecar.at("seed").get<std::uint64_t>();
    train_indices = sidecar.at("train_indices").get<std::vector<std::size_t>>();
    if (sidecar.at("op_id").get<std::uint32_t>() != out.op_id() ||
        sidecar.at("eq_id").get<std::uint32_t>() != out.eq_id() ||
        sidecar.at("vocab_size").get<std::size_t>() != out.vocab_size()) {
      throw ValidationError("sidecar", "vocabulary layout does not match p");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("sidecar", e.what());
  }

  std::istringstream in(read_file(tokens));
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::uint32_t ids[5];
    std::size_t start = 0;
    for (int k = 0; k < 5; ++k) {
      const std::size_t end = k < 4 ? line.find(' ', start) : line.size();
      if (end == std::string::npos) throw ValidationError("tokens", "line " + std::to_string(number) + ": expected 5 tokens");
      ids[k] = parse_token(std::string_view(line).substr(start, end - start), number);
      start = end + 1;
    }
    const ModDivExample example{ids[0], ids[2], ids[4]};
    if (ids[1] != out.op_id() || ids[3] != out.eq_id() || example.a >= out.p || example.b == 0 ||
        example.b >= out.p || example.c >= out.p || mul_mod(example.c, example.b, out.p) != example.a) {
      throw ValidationError("tokens", "line " + std::to_string(number) + " is not a valid equation");
    }
    out.examples.push_back(example);
  }
  out.in_train.assign(out.examples.size(), false);
  for (std::size_t i : train_indices) {
    if (i >= out.examples.size()) throw ValidationError("train_indices", "index out of range");
    out.in_train[i] = true;
  }
  return out;
}

}  // namespace patternlab
