#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace collatz::tag {

using Letter = std::uint8_t;
using Word = std::vector<Letter>;

// Post tag system T(mu, nu): on a word starting with letter j, append w_j and
// delete the first nu symbols; words shorter than nu halt.
struct TagSystem {
  unsigned mu = 2;
  unsigned nu = 1;
  std::vector<Word> productions;
  std::string name;
};

// Checks mu >= 1, nu >= 1, exactly mu productions and letters < mu.
TagSystem make_tag_system(unsigned mu, unsigned nu, std::vector<Word> productions, std::string name = "custom");

// Post's T(2,3) system: 0 -> 00, 1 -> 1101, nu = 3.
TagSystem post_tag();
// The 3x+1 tag system T_C in T(3,2): 0 -> 12, 1 -> 0, 2 -> 000.
TagSystem collatz_tag();

// Text format: a line `mu nu`, then mu production lines (`-` for the empty word).
TagSystem parse_tag_system(std::istream& in);

// Letters are written 0-9 then a-z.
Word parse_word(std::string_view text, unsigned mu);
std::string format_word(const Word& w);
Word zeros(std::size_t m);

// One step on an explicit word; nullopt when the word halts (|word| < nu).
std::optional<Word> tag_step(const TagSystem& sys, const Word& word);

// Word held as a byte buffer with an advancing head offset.
class TagMachine {
 public:
  TagMachine(const TagSystem& sys, const Word& initial);

  bool halted() const { return length() < sys_->nu; }
  // Throws DomainError once halted.
  void step();

  std::size_t length() const { return buf_.size() - head_; }
  Letter first() const { return buf_[head_]; }
  bool all_zero() const { return nonzero_ == 0 && length() > 0; }
  bool equals(const Word& w) const;
  Word word() const { return Word(buf_.begin() + static_cast<std::ptrdiff_t>(head_), buf_.end()); }
  // Polynomial hash of the current word, maintained incrementally.
  std::uint64_t hash() const { return hash_; }

 private:
  const TagSystem* sys_;
  std::vector<Letter> buf_;
  std::size_t head_ = 0;
  std::size_t nonzero_ = 0;
  std::uint64_t hash_ = 0;
  std::uint64_t top_power_ = 1;  // B^length
  std::vector<std::size_t> production_nonzero_;
};

struct TagLimits {
  std::uint64_t max_steps = 10'000'000;
  std::size_t max_length = 10'000'000;
  std::size_t history_budget_bytes = std::size_t{64} << 20;
};

enum class TagOutcome { kHalted, kReachedTarget, kCycled, kHitStepLimit, kHitLengthLimit };
std::string to_string(TagOutcome o);

struct TagRun {
  Word initial;
  TagOutcome outcome = TagOutcome::kHitStepLimit;
  std::uint64_t steps = 0;
  Word final_word;
  bool halted = false;       // final word is shorter than nu (also set alongside kReachedTarget)
  std::uint64_t period = 0;  // for kCycled
  // Lengths m of the configurations equal to 0^m, in order of appearance.
  std::vector<std::uint64_t> zero_configs;
};

// Called once per configuration: (step, word length, first letter or -1 if empty).
using TraceSink = std::function<void(std::uint64_t, std::size_t, int)>;

TagRun run_tag(const TagSystem& sys, const Word& initial, const std::optional<Word>& target,
               const TagLimits& limits = {}, const TraceSink& trace = {});

struct CollatzTagCheck {
  std::optional<bool> reaches_zero;  // nullopt when limits were hit
  std::vector<std::uint64_t> zero_lengths;
  TagRun run;
};

// Runs T_C from 0^n and asks whether it reaches the word "0".
CollatzTagCheck collatz_tag_check(std::uint64_t n, const TagLimits& limits = {});

}  // namespace collatz::tag
