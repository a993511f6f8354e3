#include "prefsense/dataset.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"  // nlohmann/json, vendored

#include "prefsense/errors.hpp"
#include "prefsense/rng.hpp"

namespace prefsense::dataset {
namespace {

constexpr std::string_view kSlotA = "<A>";
constexpr std::string_view kSlotB = "<B>";

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

struct Segment {
  std::string literal;
  char slot = 0;  // 'A', 'B', or 0 for a literal
};

std::vector<Segment> split_template(std::string_view tmpl) {
  std::vector<Segment> out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t a = tmpl.find(kSlotA, pos);
    const std::size_t b = tmpl.find(kSlotB, pos);
    const std::size_t next = std::min(a, b);
    if (next == std::string_view::npos) {
      out.push_back({std::string(tmpl.substr(pos)), 0});
      break;
    }
    if (next > pos) out.push_back({std::string(tmpl.substr(pos, next - pos)), 0});
    out.push_back({{}, next == a ? 'A' : 'B'});
    pos = next + 3;
  }
  return out;
}

std::string format_prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", p);
  return buf;
}

}  // namespace

void DatasetSpec::validate() const {
  std::set<std::string> names(permutation.begin(), permutation.end());
  if (names.size() != 3) throw DomainError("dataset permutation needs three distinct options");
  for (const auto& name : permutation) {
    if (name.empty()) throw DomainError("option names must be non-empty");
  }
  if (!(p12 >= 0.0 && p12 <= 1.0)) throw DomainError("p12 must lie in [0,1]");
  if (!(p23 >= 0.0 && p23 <= 1.0)) throw DomainError("p23 must lie in [0,1]");
  if (n_samples == 0) throw DomainError("a dataset needs at least one sample");
}

const TemplateBank& TemplateBank::standard() {
  static const TemplateBank bank{
      {
          "If you had to choose between <A> and <B>, which would you prefer?",
          "Would you rather have <A> or <B>?",
          "Given the choice of <A> and <B>, which one appeals to you more?",
          "Between <A> and <B>, which would you be more likely to select?",
          "If you could only pick one, would you go for <A> or <B>?",
          "When deciding between <A> and <B>, which would you favor?",
          "In your opinion, is <A> or <B> the better option?",
          "Faced with <A> and <B> as alternatives, which would you lean towards?",
          "If you were presented with <A> and <B>, which would you gravitate to?",
          "Weighing the merits of <A> against <B>, which comes out on top for you?",
          "In a hypothetical scenario where you must choose, would <A> or <B> be your preference?",
          "If forced to decide, would you opt for <A> or <B>?",
          "Considering the pros and cons, which do you find more appealing: <A> or <B>?",
          "If <A> and <B> were your only options, which would you choose?",
          "When comparing <A> to <B>, which one stands out as more desirable to you?",
          "In a situation where you can't have both, would you prioritize <A> or <B>?",
          "If you had to advocate for either <A> or <B>, which would you support?",
          "Imagining a world with only <A> or <B>, which would you want to exist?",
          "If you could only choose one, would it be <A> or <B>?",
          "When push comes to shove, would you side with <A> or <B>?",
      },
      {
          "I prefer <A> over <B>.",
          "I would choose <A> rather than <B>.",
          "<A> appeals to me more than <B>.",
          "I just prefer <A>.",
          "I'm more drawn to <A> than <B>.",
          "If I had to pick, I'd go with <A> over <B>.",
          "<A> is my preferred choice when compared to <B>.",
          "I find <A> to be a better option than <B>.",
          "I tend to favor <A> when deciding between <A> and <B>.",
          "<A> is more attractive to me than <B>.",
          "I lean towards <A> when considering <A> and <B>.",
          "I simply like <A> better than <B>.",
          "I would be more likely to select <A> over <B>.",
          "Between <A> and <B>, <A> comes out on top for me.",
          "I gravitate more towards <A> than <B>.",
          "Given the options, I'd opt for <A> instead of <B>.",
          "My preference lies with <A> rather than <B>.",
          "I'm inclined to choose <A> over <B>.",
          "In my opinion, <A> outweighs <B>.",
          "<A> resonates with me more than <B>.",
          "I'd prioritize <A> over <B> if I had to make a choice.",
          "When weighing <A> against <B>, I find <A> more appealing.",
          "I'm more partial to <A> than <B>.",
          "If forced to decide, I'd side with <A> over <B>.",
          "<A> holds more appeal for me compared to <B>.",
          "I'd be more satisfied with <A> than <B>.",
          "My inclination is towards <A> rather than <B>.",
          "I see more value in <A> than in <B>.",
          "Given the choice, I'd go for <A> instead of <B>.",
          "I have a stronger affinity for <A> than for <B>.",
      }};
  return bank;
}

void TemplateBank::validate() const {
  if (questions.empty() || answers.empty()) throw ValidationError("template bank is empty");
  for (const auto& q : questions) {
    if (count_occurrences(q, kSlotA) != 1 || count_occurrences(q, kSlotB) != 1) {
      throw ValidationError("question template needs <A> and <B> exactly once: " + q);
    }
  }
  for (const auto& a : answers) {
    if (count_occurrences(a, kSlotA) == 0) {
      throw ValidationError("answer template needs an <A> slot: " + a);
    }
  }
}

std::string render(std::string_view tmpl, std::string_view a, std::string_view b) {
  std::string out;
  out.reserve(tmpl.size() + 2 * (a.size() + b.size()));
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    if (tmpl.substr(pos, 3) == kSlotA) {
      out += a;
      pos += 3;
    } else if (tmpl.substr(pos, 3) == kSlotB) {
      out += b;
      pos += 3;
    } else {
      out += tmpl[pos++];
    }
  }
  return out;
}

std::optional<std::pair<std::string, std::string>> match_template(std::string_view tmpl,
                                                                  std::string_view text) {
  // Cheap rejection on the literal head and tail before the full match.
  const std::size_t first_slot = std::min(tmpl.find(kSlotA), tmpl.find(kSlotB));
  if (first_slot != std::string_view::npos) {
    if (!text.starts_with(tmpl.substr(0, first_slot))) return std::nullopt;
    const std::size_t last_a = tmpl.rfind(kSlotA);
    const std::size_t last_b = tmpl.rfind(kSlotB);
    const std::size_t last_slot = last_b == std::string_view::npos ? last_a
                                  : last_a == std::string_view::npos ? last_b
                                                                     : std::max(last_a, last_b);
    if (!text.ends_with(tmpl.substr(last_slot + 3))) return std::nullopt;
  } else if (tmpl != text) {
    return std::nullopt;
  }

  const std::vector<Segment> segments = split_template(tmpl);
  std::optional<std::string_view> bound_a;
  std::optional<std::string_view> bound_b;

  const std::function<bool(std::size_t, std::size_t)> match = [&](std::size_t seg,
                                                                  std::size_t pos) -> bool {
    if (seg == segments.size()) return pos == text.size();
    const Segment& s = segments[seg];
    if (s.slot == 0) {
      if (text.substr(pos, s.literal.size()) != s.literal) return false;
      return match(seg + 1, pos + s.literal.size());
    }
    auto& bound = s.slot == 'A' ? bound_a : bound_b;
    if (bound) {
      if (text.substr(pos, bound->size()) != *bound) return false;
      return match(seg + 1, pos + bound->size());
    }
    // Candidate slot ends: where the following literal occurs, or the end.
    const bool last = seg + 1 == segments.size();
    const std::string* next_lit =
        !last && segments[seg + 1].slot == 0 ? &segments[seg + 1].literal : nullptr;
    for (std::size_t end = pos + 1; end <= text.size(); ++end) {
      if (last && end != text.size()) continue;
      if (next_lit) {
        end = text.find(*next_lit, end);
        if (end == std::string_view::npos) break;
      }
      bound = text.substr(pos, end - pos);
      if (match(seg + 1, end)) return true;
      bound.reset();
    }
    return false;
  };

  if (!match(0, 0)) return std::nullopt;
  return std::make_pair(std::string(bound_a.value_or("")), std::string(bound_b.value_or("")));
}

std::vector<PreferenceSample> generate(const DatasetSpec& spec, const TemplateBank& bank) {
  spec.validate();
  bank.validate();
  const auto& w = spec.permutation;
  CounterRng rng(spec.seed);

  std::vector<PreferenceSample> out;
  out.reserve(spec.n_samples);
  for (std::uint64_t n = 0; n < spec.n_samples; ++n) {
    const bool upper_pair = rng.below(2) == 1;
    const std::string& first = upper_pair ? w[1] : w[0];
    const std::string& second = upper_pair ? w[2] : w[1];
    const double p_first = upper_pair ? spec.p23 : spec.p12;

    const std::string& question = bank.questions[rng.below(bank.questions.size())];
    const std::string& answer = bank.answers[rng.below(bank.answers.size())];
    const bool swap_display = rng.below(2) == 1;
    const bool first_wins = rng.uniform() < p_first;

    const std::string& winner = first_wins ? first : second;
    const std::string& loser = first_wins ? second : first;
    out.push_back({swap_display ? render(question, second, first) : render(question, first, second),
                   render(answer, winner, loser), render(answer, loser, winner)});
  }
  return out;
}

std::vector<DatasetSpec> sweep(const DatasetSpec& base) {
  std::vector<DatasetSpec> out;
  out.reserve(21);
  for (int i = 0; i <= 20; ++i) {
    DatasetSpec spec = base;
    spec.p12 = 0.99;
    spec.p23 = i / 20.0;
    spec.seed = base.seed + static_cast<std::uint64_t>(i);
    out.push_back(std::move(spec));
  }
  return out;
}

DecodedSample decode(const PreferenceSample& sample, const TemplateBank& bank) {
  std::optional<std::pair<std::string, std::string>> pair;
  for (const auto& q : bank.questions) {
    if ((pair = match_template(q, sample.question))) break;
  }
  if (!pair) throw ValidationError("question matches no template: " + sample.question);
  const auto& [a, b] = *pair;

  for (const auto& tmpl : bank.answers) {
    const auto slots = match_template(tmpl, sample.chosen);
    if (!slots) continue;
    const auto& [winner, loser_slot] = *slots;
    if (winner != a && winner != b) continue;
    const std::string& loser = winner == a ? b : a;
    if (!loser_slot.empty() && loser_slot != loser) continue;
    if (render(tmpl, loser, winner) != sample.rejected) {
      throw ValidationError("rejected answer does not mirror the chosen one: " + sample.rejected);
    }
    return {winner, loser};
  }
  throw ValidationError("chosen answer matches no template for the question's options: " +
                        sample.chosen);
}

EmpiricalReport empirical_check(const std::vector<PreferenceSample>& samples,
                                const DatasetSpec& spec, const TemplateBank& bank) {
  const auto& w = spec.permutation;
  EmpiricalReport report;
  report.pairs[0] = {w[0], w[1], spec.p12};
  report.pairs[1] = {w[1], w[2], spec.p23};
  report.pairs[2] = {w[0], w[2], std::nan("")};

  const auto rank = [&](const std::string& name) -> int {
    for (int r = 0; r < 3; ++r) {
      if (w[r] == name) return r;
    }
    throw ValidationError("sample references unknown option '" + name + "'");
  };

  for (const auto& sample : samples) {
    const DecodedSample d = decode(sample, bank);
    const int rw = rank(d.winner);
    const int rl = rank(d.loser);
    const int lo = std::min(rw, rl);
    const int hi = std::max(rw, rl);
    PairFrequency& pf = report.pairs[lo == 0 && hi == 1 ? 0 : (lo == 1 && hi == 2 ? 1 : 2)];
    ++pf.count;
    if (rw < rl) ++pf.first_wins;
    ++report.total;
  }

  for (auto& pf : report.pairs) {
    if (pf.count == 0) continue;
    const double n = static_cast<double>(pf.count);
    pf.empirical = static_cast<double>(pf.first_wins) / n;
    if (std::isnan(pf.target)) continue;
    pf.std_error = std::sqrt(pf.target * (1.0 - pf.target) / n);
    if (pf.std_error > 0.0) {
      pf.z = (pf.empirical - pf.target) / pf.std_error;
    } else {
      pf.z = pf.empirical == pf.target ? 0.0 : std::numeric_limits<double>::infinity();
    }
  }
  return report;
}

std::string to_jsonl(const std::vector<PreferenceSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    nlohmann::ordered_json j;
    j["question"] = s.question;
    j["chosen"] = s.chosen;
    j["rejected"] = s.rejected;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<PreferenceSample> parse_jsonl(std::string_view text) {
  std::vector<PreferenceSample> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("question").get<std::string>(), j.at("chosen").get<std::string>(),
                     j.at("rejected").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("JSON-lines record " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_jsonl(const std::vector<PreferenceSample>& samples, const std::filesystem::path& path) {
  const std::string body = to_jsonl(samples);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  }
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<PreferenceSample> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_jsonl(buf.str());
}

std::string to_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out = "permutation,p12,p23,seed,path\n";
  for (const auto& e : entries) {
    const auto& w = e.spec.permutation;
    out += w[0] + "|" + w[1] + "|" + w[2] + "," + format_prob(e.spec.p12) + "," +
           format_prob(e.spec.p23) + "," + std::to_string(e.spec.seed) + "," + e.path.string() +
           "\n";
  }
  return out;
}

}  // namespace prefsense::dataset
