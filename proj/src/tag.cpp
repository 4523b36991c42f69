#include "collatz/tag.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "collatz/error.hpp"

namespace collatz::tag {

namespace {

constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
constexpr std::uint64_t kBase = 1'000'003;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(p & kMod) + static_cast<std::uint64_t>(p >> 61);
  if (r >= kMod) r -= kMod;
  return r;
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul_mod(r, b);
    b = mul_mod(b, b);
    e >>= 1;
  }
  return r;
}

const std::uint64_t kBaseInverse = pow_mod(kBase, kMod - 2);

char letter_char(Letter l) { return l < 10 ? static_cast<char>('0' + l) : static_cast<char>('a' + (l - 10)); }

}  // namespace

TagSystem make_tag_system(unsigned mu, unsigned nu, std::vector<Word> productions, std::string name) {
  if (mu < 1 || mu > 36) throw DomainError("tag alphabet size must be in [1, 36]");
  if (nu < 1) throw DomainError("tag deletion number must be at least 1");
  if (productions.size() != mu) {
    throw DomainError("tag system needs exactly " + std::to_string(mu) + " productions, got " +
                      std::to_string(productions.size()));
  }
  for (const Word& w : productions) {
    for (const Letter l : w) {
      if (l >= mu) throw DomainError("production letter " + std::to_string(l) + " outside alphabet");
    }
  }
  return TagSystem{mu, nu, std::move(productions), std::move(name)};
}

TagSystem post_tag() { return make_tag_system(2, 3, {{0, 0}, {1, 1, 0, 1}}, "post"); }

TagSystem collatz_tag() { return make_tag_system(3, 2, {{1, 2}, {0}, {0, 0, 0}}, "collatz"); }

Word parse_word(std::string_view text, unsigned mu) {
  Word w;
  w.reserve(text.size());
  for (const char ch : text) {
    int v = -1;
    if (ch >= '0' && ch <= '9') v = ch - '0';
    else if (ch >= 'a' && ch <= 'z') v = ch - 'a' + 10;
    if (v < 0 || static_cast<unsigned>(v) >= mu) {
      throw DomainError(std::string("letter '") + ch + "' is outside the alphabet of size " + std::to_string(mu));
    }
    w.push_back(static_cast<Letter>(v));
  }
  return w;
}

std::string format_word(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (const Letter l : w) s.push_back(letter_char(l));
  return s;
}

Word zeros(std::size_t m) { return Word(m, 0); }

TagSystem parse_tag_system(std::istream& in) {
  std::string line;
  unsigned mu = 0;
  unsigned nu = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream header(line);
    if (!(header >> mu >> nu)) throw DomainError("tag system file: expected 'mu nu' header, got '" + line + "'");
    break;
  }
  if (mu == 0) throw DomainError("tag system file: missing header");
  std::vector<Word> productions;
  while (productions.size() < mu && std::getline(in, line)) {
    std::string text;
    std::istringstream row(line);
    row >> text;
    if (text == "-") text.clear();
    productions.push_back(parse_word(text, mu));
  }
  return make_tag_system(mu, nu, std::move(productions));
}

std::optional<Word> tag_step(const TagSystem& sys, const Word& word) {
  if (word.empty()) throw DomainError("tag_step needs a nonempty word");
  if (word.size() < sys.nu) return std::nullopt;
  if (word.front() >= sys.mu) throw DomainError("letter outside the alphabet");
  Word next(word.begin() + sys.nu, word.end());
  const Word& w = sys.productions[word.front()];
  next.insert(next.end(), w.begin(), w.end());
  return next;
}

TagMachine::TagMachine(const TagSystem& sys, const Word& initial) : sys_(&sys), buf_(initial) {
  for (const Letter l : initial) {
    if (l >= sys.mu) throw DomainError("initial word has a letter outside the alphabet");
    if (l) ++nonzero_;
    hash_ = (mul_mod(hash_, kBase) + l + 1) % kMod;
    top_power_ = mul_mod(top_power_, kBase);
  }
  for (const Word& w : sys.productions) {
    std::size_t nz = 0;
    for (const Letter l : w) nz += l ? 1 : 0;
    production_nonzero_.push_back(nz);
  }
}

void TagMachine::step() {
  if (halted()) throw DomainError("tag machine has halted; no further steps are defined");
  const Letter lead = first();
  for (const Letter l : sys_->productions[lead]) {
    buf_.push_back(l);
    hash_ = (mul_mod(hash_, kBase) + l + 1) % kMod;
    top_power_ = mul_mod(top_power_, kBase);
  }
  nonzero_ += production_nonzero_[lead];
  for (unsigned i = 0; i < sys_->nu; ++i) {
    const Letter l = buf_[head_++];
    if (l) --nonzero_;
    top_power_ = mul_mod(top_power_, kBaseInverse);
    hash_ = (hash_ + kMod - mul_mod(l + 1, top_power_)) % kMod;
  }
  if (head_ > 4096 && head_ * 2 > buf_.size()) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(head_));
    head_ = 0;
  }
}

bool TagMachine::equals(const Word& w) const {
  return w.size() == length() && std::equal(w.begin(), w.end(), buf_.begin() + static_cast<std::ptrdiff_t>(head_));
}

std::string to_string(TagOutcome o) {
  switch (o) {
    case TagOutcome::kHalted: return "Halted";
    case TagOutcome::kReachedTarget: return "ReachedTarget";
    case TagOutcome::kCycled: return "Cycled";
    case TagOutcome::kHitStepLimit: return "HitStepLimit";
    case TagOutcome::kHitLengthLimit: return "HitLengthLimit";
  }
  return "?";
}

namespace {

bool word_at_step_equals(const TagSystem& sys, const Word& initial, std::uint64_t step, const TagMachine& now) {
  TagMachine replay(sys, initial);
  for (std::uint64_t i = 0; i < step; ++i) replay.step();
  return replay.length() == now.length() && replay.word() == now.word();
}

}  // namespace

TagRun run_tag(const TagSystem& sys, const Word& initial, const std::optional<Word>& target,
               const TagLimits& limits, const TraceSink& trace) {
  if (initial.empty()) throw DomainError("tag runs need a nonempty initial word");
  TagRun run;
  run.initial = initial;
  TagMachine m(sys, initial);

  struct Seen {
    std::uint64_t step;
    std::size_t length;
  };
  std::unordered_multimap<std::uint64_t, Seen> history;
  bool recording = true;
  constexpr std::size_t kEntryCost = 48;

  std::uint64_t step = 0;
  while (true) {
    const std::size_t len = m.length();
    if (trace) trace(step, len, len ? static_cast<int>(m.first()) : -1);
    if (m.all_zero()) run.zero_configs.push_back(len);
    if (target && m.equals(*target)) {
      run.outcome = TagOutcome::kReachedTarget;
      run.halted = m.halted();
      break;
    }
    if (m.halted()) {
      run.outcome = TagOutcome::kHalted;
      run.halted = true;
      break;
    }
    if (len > limits.max_length) {
      run.outcome = TagOutcome::kHitLengthLimit;
      break;
    }
    if (recording) {
      bool cycled = false;
      const auto [begin, end] = history.equal_range(m.hash());
      for (auto it = begin; it != end && !cycled; ++it) {
        if (it->second.length == len && word_at_step_equals(sys, initial, it->second.step, m)) {
          run.outcome = TagOutcome::kCycled;
          run.period = step - it->second.step;
          cycled = true;
        }
      }
      if (cycled) break;
      history.emplace(m.hash(), Seen{step, len});
      if (history.size() * kEntryCost > limits.history_budget_bytes) {
        recording = false;
        history.clear();
      }
    }
    if (step >= limits.max_steps) {
      run.outcome = TagOutcome::kHitStepLimit;
      break;
    }
    m.step();
    ++step;
  }
  run.steps = step;
  run.final_word = m.word();
  return run;
}

CollatzTagCheck collatz_tag_check(std::uint64_t n, const TagLimits& limits) {
  if (n < 1) throw DomainError("collatz tag check needs n >= 1");
  static const TagSystem tc = collatz_tag();
  CollatzTagCheck check;
  check.run = run_tag(tc, zeros(n), Word{0}, limits);
  check.zero_lengths = check.run.zero_configs;
  switch (check.run.outcome) {
    case TagOutcome::kReachedTarget: check.reaches_zero = true; break;
    case TagOutcome::kHalted:
    case TagOutcome::kCycled: check.reaches_zero = false; break;
    default: break;
  }
  return check;
}

}  // namespace collatz::tag
