#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prefsense::dataset {

/// D(omega, p12, p23): three options ranked omega[0], omega[1], omega[2];
/// p12 = P(omega[0] chosen over omega[1]); p23 = P(omega[1] over omega[2]).
/// The pair (omega[0], omega[2]) is never sampled. p12/p23 may be 0 or 1
/// (degenerate Bernoulli).
struct DatasetSpec {
  std::array<std::string, 3> permutation;
  double p12 = 0.99;
  double p23 = 0.5;
  std::uint64_t n_samples = 10000;
  std::uint64_t seed = 0;

  /// Throws DomainError on duplicate names, empty names, p outside [0,1],
  /// or n_samples == 0.
  void validate() const;
};

struct PreferenceSample {
  std::string question;
  std::string chosen;
  std::string rejected;

  friend bool operator==(const PreferenceSample&, const PreferenceSample&) = default;
};

/// Question and answer templates with <A>/<B> slots.
struct TemplateBank {
  std::vector<std::string> questions;
  std::vector<std::string> answers;

  /// The 20 question and 30 answer templates used for the animal datasets.
  static const TemplateBank& standard();

  /// Every question must contain <A> and <B> exactly once; every answer at
  /// least one <A>.
  void validate() const;
};

/// Replaces every <A> with a and every <B> with b.
std::string render(std::string_view tmpl, std::string_view a, std::string_view b);

/// Matches text against a template and returns the (A, B) slot values; B is
/// empty when the template has no <B>. Repeated slots must bind consistently.
std::optional<std::pair<std::string, std::string>> match_template(std::string_view tmpl,
                                                                  std::string_view text);

/// Exactly spec.n_samples samples. Per sample the RNG is consumed in the
/// order: pair, question template, answer template, display order, Bernoulli.
std::vector<PreferenceSample> generate(const DatasetSpec& spec,
                                       const TemplateBank& bank = TemplateBank::standard());

/// 21 specs with p12 = 0.99 and p23 = 0, 0.05, ..., 1; seed = base.seed + i.
std::vector<DatasetSpec> sweep(const DatasetSpec& base);

/// A sample decoded back to its comparison.
struct DecodedSample {
  std::string winner;
  std::string loser;
};

/// Recovers winner/loser from the chosen answer's slots, checked against the
/// question's option pair. Throws ValidationError on unmatched text.
DecodedSample decode(const PreferenceSample& sample,
                     const TemplateBank& bank = TemplateBank::standard());

struct PairFrequency {
  std::string first;   ///< higher-ranked option in the dataset permutation
  std::string second;
  double target = 0.0;          ///< target probability of first chosen (NaN if unspecified)
  std::uint64_t count = 0;      ///< samples comparing this pair
  std::uint64_t first_wins = 0;
  double empirical = 0.0;       ///< first_wins / count (0 when count == 0)
  double std_error = 0.0;       ///< sqrt(target (1 - target) / count)
  double z = 0.0;               ///< (empirical - target) / std_error
};

struct EmpiricalReport {
  std::array<PairFrequency, 3> pairs;  ///< (1,2), (2,3), (1,3)
  std::uint64_t total = 0;
};

/// Per-pair frequencies and z-scores against the dataset targets. Throws
/// ValidationError when a sample mentions options outside the permutation.
EmpiricalReport empirical_check(const std::vector<PreferenceSample>& samples,
                                const DatasetSpec& spec,
                                const TemplateBank& bank = TemplateBank::standard());

/// One JSON object per line: {"question":..,"chosen":..,"rejected":..}.
std::string to_jsonl(const std::vector<PreferenceSample>& samples);
std::vector<PreferenceSample> parse_jsonl(std::string_view text);

void write_jsonl(const std::vector<PreferenceSample>& samples, const std::filesystem::path& path);
std::vector<PreferenceSample> read_jsonl(const std::filesystem::path& path);

struct ManifestEntry {
  DatasetSpec spec;
  std::filesystem::path path;
};

/// CSV with header "permutation,p12,p23,seed,path"; names joined by '|'.
std::string to_manifest(const std::vector<ManifestEntry>& entries);

}  // namespace prefsense::dataset
