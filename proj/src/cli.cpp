#include "collatz/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "collatz/affine_sets.hpp"
#include "collatz/error.hpp"
#include "collatz/maps.hpp"
#include "collatz/model.hpp"
#include "collatz/report.hpp"
#include "collatz/sieve.hpp"
#include "collatz/stats.hpp"
#include "collatz/tag.hpp"
#include "collatz/trajectory.hpp"

namespace collatz::cli {

namespace {

// Leading decimal digits of pi; floor(pi * 10^K) is the first K+1 of them.
constexpr std::string_view kPiDigits =
    "31415926535897932384626433832795028841971693993751058209749445923078164062862089986280348253421170679";

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  Natural parse() {
    mpz_class v = expr();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return Natural::from_mpz(v);
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw DomainError("cannot parse number '" + std::string(s_) + "': " + why);
  }
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(std::string_view token) {
    skip_space();
    if (s_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  std::string digits() {
    skip_space();
    const std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (b == pos_) fail("expected digits");
    return std::string(s_.substr(b, pos_ - b));
  }
  static unsigned long small(const mpz_class& v, unsigned long cap, const char* what) {
    if (sgn(v) < 0 || v > cap) throw DomainError(std::string(what) + " out of range");
    return v.get_ui();
  }

  mpz_class expr() {
    mpz_class v = term();
    while (true) {
      if (accept("+")) v += term();
      else if (accept("-")) v -= term();
      else break;
    }
    if (sgn(v) < 0) fail("negative value");
    return v;
  }
  mpz_class term() {
    mpz_class v = power();
    while (accept("*")) v *= power();
    return v;
  }
  mpz_class power() {
    mpz_class base = atom();
    if (accept("^")) {
      const unsigned long e = small(atom(), 1'000'000, "exponent");
      mpz_class r;
      mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
      return r;
    }
    return base;
  }
  mpz_class atom() {
    if (accept("(")) {
      mpz_class v = expr();
      if (!accept(")")) fail("missing ')'");
      return v;
    }
    if (accept("floor(pi*1e")) {
      const unsigned long k = small(mpz_class(digits()), kPiDigits.size() - 1, "pi digit count");
      if (!accept(")")) fail("missing ')'");
      return mpz_class(std::string(kPiDigits.substr(0, k + 1)));
    }
    mpz_class v(digits());
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      const unsigned long e = small(mpz_class(digits()), 1'000'000, "decimal exponent");
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, e);
      v *= scale;
    }
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::uint64_t to_u64(const std::string& text, const char* what) {
  const Natural n = parse_natural(text);
  if (!n.fits_u64()) throw DomainError(std::string(what) + " must fit in 64 bits");
  return n.to_u64();
}

// Writes to --output when given, else to the command's stream.
void emit(std::ostream& out, const std::string& path, const std::string& data) {
  if (path.empty()) {
    out << data;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << data;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct LimitFlags {
  std::uint64_t max_steps = 1'000'000;
  std::uint64_t max_bits = 100'000;
  IterationLimits limits() const { return {max_steps, max_bits}; }
};

void add_limits(CLI::App* cmd, LimitFlags& f) {
  cmd->add_option("--max-steps", f.max_steps, "iteration step limit")->capture_default_str();
  cmd->add_option("--max-bits", f.max_bits, "bit-length limit for iterates")->capture_default_str();
}

std::string trajectory_text(const Trajectory& t, const GeneralizedCollatzMap& map) {
  std::ostringstream os;
  os << "map: " << map.name() << "\n";
  os << "start: " << t.start << "\n";
  os << "outcome: " << to_string(t.outcome) << "\n";
  os << "steps: " << t.steps << "\n";
  os << "peak: " << t.peak << "\n";
  if (t.cycle) os << "cycle: " << t.cycle->to_string() << " (length " << t.cycle->length() << ")\n";
  for (std::size_t i = 0; i < t.values.size(); ++i) os << i << ' ' << t.values[i] << '\n';
  return os.str();
}

int exit_for(Outcome o) { return is_limit(o) ? kUnresolved : kOk; }

}  // namespace

Natural parse_natural(std::string_view text) { return ExprParser(text).parse(); }

unsigned default_workers() {
  if (const char* env = std::getenv("COLLATZ_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"collatz-lab: 3x+1 iteration, statistics, sieve verification, tag systems and affine sets"};
  app.require_subcommand(1);
  int code = kOk;
  const unsigned workers_default = default_workers();

  // traj
  auto* traj = app.add_subcommand("traj", "iterate a map from n");
  std::string traj_map = "3x+1", traj_n, traj_format = "text", traj_scale = "linear", traj_overlay = "none",
              traj_output;
  std::optional<bool> traj_stop;
  LimitFlags traj_limits;
  traj->add_option("--map", traj_map, "map: 3x+1, collatz, 5x+1, 3x+<k>, U or d=..;pairs=..;partial=..")
      ->capture_default_str();
  traj->add_option("--n", traj_n, "starting value")->required();
  traj->add_option("--stop-at-one", traj_stop, "stop on reaching 1 (default: true for 3x+1/collatz)");
  traj->add_option("--format", traj_format)->check(CLI::IsMember({"text", "csv", "json", "svg"}))->capture_default_str();
  traj->add_option("--scale", traj_scale)->check(CLI::IsMember({"linear", "log"}))->capture_default_str();
  traj->add_option("--overlay", traj_overlay)->check(CLI::IsMember({"none", "slope", "extremal"}))->capture_default_str();
  traj->add_option("--output", traj_output, "write to a file instead of stdout");
  add_limits(traj, traj_limits);
  traj->callback([&] {
    const GeneralizedCollatzMap map = parse_map_spec(traj_map);
    const Natural n = parse_natural(traj_n);
    const Trajectory t = iterate(map, n, traj_limits.limits(), traj_stop.value_or(map.default_stop_at_one()));
    if (traj_format == "csv") emit(out, traj_output, report::trajectory_csv(t));
    else if (traj_format == "json") emit(out, traj_output, dump(report::trajectory_json(t, map)));
    else if (traj_format == "svg") {
      const auto scale = traj_scale == "log" ? report::Scale::kLog : report::Scale::kLinear;
      const auto overlay = traj_overlay == "slope"      ? report::Overlay::kSlope
                           : traj_overlay == "extremal" ? report::Overlay::kExtremal
                                                        : report::Overlay::kNone;
      emit(out, traj_output, report::render_svg(t, scale, overlay));
    } else {
      emit(out, traj_output, trajectory_text(t, map));
    }
    if (is_limit(t.outcome)) err << "outcome: " << to_string(t.outcome) << "\n";
    code = exit_for(t.outcome);
  });

  // stats
  auto* stats = app.add_subcommand("stats", "per-n trajectory statistics under T");
  std::string stats_n, stats_format = "text";
  LimitFlags stats_limits;
  stats->add_option("--n", stats_n)->required();
  stats->add_option("--format", stats_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  add_limits(stats, stats_limits);
  stats->callback([&] {
    const StatRecord r = compute_stats(parse_natural(stats_n), stats_limits.limits());
    if (stats_format == "json") {
      out << dump(report::stats_json(r));
    } else {
      auto opt = [](const std::optional<double>& v) {
        if (!v) return std::string("undefined");
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.5f", *v);
        return std::string(buf);
      };
      out << "n: " << r.n << "\n";
      out << "sigma_inf: " << (r.sigma_inf ? std::to_string(*r.sigma_inf) : "unknown") << "\n";
      out << "stopping_time: "
          << (r.stopping.kind == StoppingTime::kFinite     ? std::to_string(r.stopping.steps)
              : r.stopping.kind == StoppingTime::kInfinite ? std::string("infinite")
                                                           : std::string("unknown"))
          << "\n";
      out << "one_ratio: " << (r.one_ratio ? r.one_ratio->to_decimal(5) : "undefined") << "\n";
      out << "rho: " << opt(r.rho) << "\n";
      out << "gamma: " << opt(r.gamma) << "\n";
      out << "max_iterate: " << r.max_iterate << "\n";
    }
    code = r.sigma_inf ? kOk : kUnresolved;
  });

  // census
  auto* census = app.add_subcommand("census", "sigma_inf census of a block of consecutive n");
  std::string census_base, census_format = "text", census_output;
  std::uint64_t census_len = 100;
  unsigned census_workers = workers_default;
  LimitFlags census_limits;
  census->add_option("--base", census_base)->required();
  census->add_option("--len", census_len)->capture_default_str();
  census->add_option("--format", census_format)
      ->check(CLI::IsMember({"text", "grid", "rows", "csv", "json"}))
      ->capture_default_str();
  census->add_option("--workers", census_workers);
  census->add_option("--output", census_output);
  add_limits(census, census_limits);
  census->callback([&] {
    const BlockCensus c = block_census(parse_natural(census_base), census_len, census_limits.limits(), census_workers);
    std::string data;
    if (census_format == "grid") data = report::render_table(c);
    else if (census_format == "rows") data = report::render_rows(c);
    else if (census_format == "csv") data = report::census_csv(c);
    else if (census_format == "json") data = dump(report::census_json(c));
    else data = report::render_table(c) + "\n" + report::render_rows(c);
    emit(out, census_output, data);
  });

  // verify
  auto* verify = app.add_subcommand("verify", "sieve-accelerated verification of a range");
  std::string verify_from = "1", verify_to, verify_checkpoint, verify_format = "text";
  unsigned verify_k = 16;
  unsigned verify_workers = workers_default;
  std::optional<std::uint64_t> verify_stop_after;
  std::uint64_t verify_max_steps = 1'000'000;
  verify->add_option("--from", verify_from)->capture_default_str();
  verify->add_option("--to", verify_to)->required();
  verify->add_option("--sieve-k", verify_k)->capture_default_str();
  verify->add_option("--workers", verify_workers);
  verify->add_option("--checkpoint", verify_checkpoint, "resumable checkpoint file");
  verify->add_option("--max-steps", verify_max_steps)->capture_default_str();
  verify->add_option("--stop-after-blocks", verify_stop_after, "stop early, leaving a resumable checkpoint");
  verify->add_option("--format", verify_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  verify->callback([&] {
    VerifyOptions opt;
    opt.k = verify_k;
    opt.workers = verify_workers;
    opt.checkpoint_path = verify_checkpoint;
    opt.stop_after_blocks = verify_stop_after;
    opt.limits.max_steps = verify_max_steps;
    const VerificationReport r = verify_range(to_u64(verify_from, "--from"), to_u64(verify_to, "--to"), opt);
    if (verify_format == "json") {
      out << dump(report::verification_json(r));
    } else {
      out << "range: " << r.lo << ".." << r.hi << "\n";
      out << "sieve k: " << r.k << "\n";
      out << "workers: " << r.workers << "\n";
      out << "complete: " << (r.complete ? "yes" : "no") << " (block " << r.next_block << " of " << r.end_block
          << ")\n";
      out << "survivors checked: " << r.survivors_checked << "\n";
      out << "counterexamples: " << r.counterexamples.size() << "\n";
      for (const auto& c : r.counterexamples) out << "  " << c.n << ' ' << c.reason << "\n";
    }
    code = !r.counterexamples.empty() ? kCounterexample : (r.complete ? kOk : kUnresolved);
  });

  // records
  auto* records = app.add_subcommand("records", "running maxima of gamma, rho and peak iterate");
  std::string rec_from = "2", rec_to, rec_format = "text";
  double rec_threshold = 6.143;
  unsigned rec_workers = workers_default;
  LimitFlags rec_limits;
  records->add_option("--from", rec_from)->capture_default_str();
  records->add_option("--to", rec_to)->required();
  records->add_option("--gamma-threshold", rec_threshold)->capture_default_str();
  records->add_option("--workers", rec_workers);
  records->add_option("--format", rec_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  add_limits(records, rec_limits);
  records->callback([&] {
    const RecordTable t = scan_records(to_u64(rec_from, "--from"), to_u64(rec_to, "--to"), rec_threshold,
                                       rec_limits.limits(), rec_workers);
    if (rec_format == "json") {
      out << dump(report::records_json(t));
    } else {
      out << "range: " << t.lo << ".." << t.hi << "\n";
      out << "gamma records (n, sigma/ln n):\n";
      for (const auto& g : t.gamma) out << "  " << g.n << ' ' << g.value << "\n";
      out << "rho records (n, rho):\n";
      for (const auto& r : t.rho) out << "  " << r.n << ' ' << r.value << "\n";
      out << "peak records (n, peak):\n";
      for (const auto& p : t.peak) out << "  " << p.n << ' ' << p.peak << "\n";
      out << "n with sigma_inf >= " << t.gamma_threshold << " ln n: " << t.gamma_threshold_hits << "\n";
      out << "unresolved: " << t.unresolved << "\n";
    }
    code = t.unresolved ? kUnresolved : kOk;
  });

  // predict
  auto* predict = app.add_subcommand("predict", "probabilistic-model predictions as JSON");
  std::string predict_n;
  predict->add_option("--n", predict_n)->required();
  predict->callback([&] {
    const Natural n = parse_natural(predict_n);
    out << dump(report::prediction_json(n, model::predict(n)));
  });

  // compare
  auto* compare = app.add_subcommand("compare", "compare a T-trajectory with the model line");
  std::string compare_n, compare_format = "text", compare_output;
  LimitFlags compare_limits;
  compare->add_option("--n", compare_n)->required();
  compare->add_option("--format", compare_format)->check(CLI::IsMember({"text", "csv", "json"}))->capture_default_str();
  compare->add_option("--output", compare_output);
  add_limits(compare, compare_limits);
  compare->callback([&] {
    const Natural n = parse_natural(compare_n);
    const Trajectory t = iterate(t_map(), n, compare_limits.limits(), true);
    if (t.outcome != Outcome::kReachedOne) {
      err << "trajectory did not reach 1 (" << to_string(t.outcome) << ")\n";
      code = kUnresolved;
      return;
    }
    const model::Comparison c = model::compare(t);
    if (compare_format == "csv") {
      emit(out, compare_output, report::comparison_csv(c));
    } else if (compare_format == "json") {
      emit(out, compare_output, dump(report::comparison_json(c)));
    } else {
      std::ostringstream os;
      os << "n: " << n << "\n";
      os << "observed steps: " << c.observed_steps << "\n";
      os << "predicted steps: " << c.predicted_steps << "\n";
      os << "observed/predicted: " << c.ratio << "\n";
      os << "max |residual|: " << c.max_abs_residual << "\n";
      os << "mean |residual|: " << c.mean_abs_residual << "\n";
      if (c.small_n_caveat) os << "caveat: n is small; the model is asymptotic\n";
      emit(out, compare_output, os.str());
    }
  });

  // tag
  auto* tagcmd = app.add_subcommand("tag", "Post tag systems");
  tagcmd->require_subcommand(1);
  auto* tag_run = tagcmd->add_subcommand("run", "run a tag system");
  auto* tag_post = tagcmd->add_subcommand("post", "run Post's T(2,3) system 0->00, 1->1101");
  auto* tag_check = tagcmd->add_subcommand("check", "check T_C from 0^n reaches 0 for a range of n");
  std::string tag_system = "collatz", tag_initial, tag_target, tag_trace, tag_format = "text";
  std::uint64_t tag_max_steps = 10'000'000;
  std::size_t tag_max_length = 10'000'000;
  std::uint64_t check_from = 1, check_to = 100;
  tag_run->add_option("--system", tag_system, "post, collatz or a system file")->capture_default_str();
  for (auto* c : {tag_run, tag_post}) {
    c->add_option("--initial", tag_initial)->required();
    c->add_option("--max-steps", tag_max_steps)->capture_default_str();
    c->add_option("--max-length", tag_max_length)->capture_default_str();
    c->add_option("--trace", tag_trace, "write step,word_length,first_letter CSV");
    c->add_option("--format", tag_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  }
  tag_run->add_option("--target", tag_target);
  tag_check->add_option("--from", check_from)->capture_default_str();
  tag_check->add_option("--to", check_to)->capture_default_str();
  tag_check->add_option("--max-steps", tag_max_steps)->capture_default_str();

  auto do_tag_run = [&](const tag::TagSystem& sys) {
    const tag::Word initial = tag::parse_word(tag_initial, sys.mu);
    std::optional<tag::Word> target;
    if (!tag_target.empty()) target = tag::parse_word(tag_target, sys.mu);
    tag::TagLimits limits;
    limits.max_steps = tag_max_steps;
    limits.max_length = tag_max_length;
    std::ofstream trace_file;
    tag::TraceSink sink;
    if (!tag_trace.empty()) {
      trace_file.open(tag_trace, std::ios::binary);
      if (!trace_file) throw std::runtime_error("cannot write " + tag_trace);
      trace_file << report::csv_row({"step", "word_length", "first_letter"});
      sink = [&](std::uint64_t step, std::size_t len, int first) {
        trace_file << report::csv_row({std::to_string(step), std::to_string(len),
                                       first < 0 ? std::string() : std::to_string(first)});
      };
    }
    const tag::TagRun r = tag::run_tag(sys, initial, target, limits, sink);
    if (tag_format == "json") {
      out << dump(report::tag_run_json(sys, r));
    } else {
      out << "system: " << sys.name << " (mu=" << sys.mu << ", nu=" << sys.nu << ")\n";
      out << "outcome: " << tag::to_string(r.outcome) << (r.halted ? " (halted)" : "") << "\n";
      out << "steps: " << r.steps << "\n";
      if (r.outcome == tag::TagOutcome::kCycled) out << "period: " << r.period << "\n";
      out << "final length: " << r.final_word.size() << "\n";
      if (r.final_word.size() <= 200) out << "final word: " << tag::format_word(r.final_word) << "\n";
    }
    const bool limited = r.outcome == tag::TagOutcome::kHitStepLimit || r.outcome == tag::TagOutcome::kHitLengthLimit;
    code = limited ? kUnresolved : kOk;
  };
  tag_run->callback([&] {
    if (tag_system == "post") {
      do_tag_run(tag::post_tag());
    } else if (tag_system == "collatz") {
      do_tag_run(tag::collatz_tag());
    } else {
      std::ifstream f(tag_system);
      if (!f) throw DomainError("cannot open tag system file " + tag_system);
      do_tag_run(tag::parse_tag_system(f));
    }
  });
  tag_post->callback([&] { do_tag_run(tag::post_tag()); });
  tag_check->callback([&] {
    if (check_from < 1 || check_from > check_to) throw DomainError("tag check needs 1 <= from <= to");
    tag::TagLimits limits;
    limits.max_steps = tag_max_steps;
    std::uint64_t ok = 0;
    std::uint64_t unknown = 0;
    for (std::uint64_t n = check_from; n <= check_to; ++n) {
      const auto c = tag::collatz_tag_check(n, limits);
      const Trajectory t = iterate(t_map(), Natural(n), {}, true);
      std::vector<std::uint64_t> expect;
      for (const auto& v : t.values) expect.push_back(v.to_u64());
      const bool match = c.zero_lengths == expect;
      if (!c.reaches_zero) ++unknown;
      else if (*c.reaches_zero && match) ++ok;
      out << n << ' ' << (c.reaches_zero ? (*c.reaches_zero ? "reaches-0" : "does-not-reach-0") : "unknown") << ' '
          << (match ? "zero-lengths-match-T" : "zero-lengths-differ") << "\n";
    }
    out << "confirmed: " << ok << " of " << (check_to - check_from + 1) << "\n";
    code = ok == check_to - check_from + 1 ? kOk : (unknown ? kUnresolved : kDomainError);
  });

  // cycles
  auto* cycles = app.add_subcommand("cycles", "cycle census of a map over a range of starts");
  std::string cycles_map = "3x+1", cycles_from = "1", cycles_to, cycles_format = "text";
  unsigned cycles_workers = workers_default;
  LimitFlags cycles_limits;
  cycles->add_option("--map", cycles_map)->capture_default_str();
  cycles->add_option("--from", cycles_from)->capture_default_str();
  cycles->add_option("--to", cycles_to)->required();
  cycles->add_option("--workers", cycles_workers);
  cycles->add_option("--format", cycles_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  add_limits(cycles, cycles_limits);
  cycles->callback([&] {
    const GeneralizedCollatzMap map = parse_map_spec(cycles_map);
    const CycleCensus c = cycle_census(map, to_u64(cycles_from, "--from"), to_u64(cycles_to, "--to"),
                                       cycles_limits.limits(), cycles_workers);
    if (cycles_format == "json") {
      out << dump(report::census_cycles_json(c, map));
    } else {
      out << "map: " << map.name() << "\n";
      out << "range: " << c.lo << ".." << c.hi << "\n";
      out << "cycles: " << c.cycles.size() << "\n";
      for (const auto& cy : c.cycles) out << "  " << cy.to_string() << " length " << cy.length() << "\n";
      out << "unresolved starts: " << c.unresolved.size() << "\n";
      for (const auto& u : c.unresolved) {
        out << "  " << u.start << ' ' << to_string(u.outcome);
        if (u.via) out << " via " << *u.via;
        out << "\n";
      }
    }
    code = c.unresolved.empty() ? kOk : kUnresolved;
  });

  // sets
  auto* sets = app.add_subcommand("sets", "integer sets closed under affine maps");
  sets->require_subcommand(1);
  auto* closure = sets->add_subcommand("closure", "closure of {1} under a preset generator set");
  std::string sets_preset = "s0", sets_bound, sets_ceiling, sets_format = "text", sets_output, sets_density;
  unsigned sets_workers = workers_default;
  closure->add_option("--preset", sets_preset)->check(CLI::IsMember({"s0", "s1", "s2"}))->capture_default_str();
  closure->add_option("--bound", sets_bound)->required();
  closure->add_option("--ceiling", sets_ceiling, "exploration ceiling (default: 2^20*bound for s0, bound otherwise)");
  closure->add_option("--density", sets_density, "comma-separated checkpoints for a density profile");
  closure->add_option("--format", sets_format)->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  closure->add_option("--workers", sets_workers);
  closure->add_option("--output", sets_output);
  closure->callback([&] {
    const std::uint64_t bound = to_u64(sets_bound, "--bound");
    std::optional<std::uint64_t> ceiling;
    if (!sets_ceiling.empty()) ceiling = to_u64(sets_ceiling, "--ceiling");
    ClosureSet s;
    if (sets_preset == "s0") {
      s = backward_collatz_set(bound, ceiling, sets_workers);
    } else {
      auto gens = sets_preset == "s1" ? erdos_generators() : klarner_generators();
      s = closure_up_to({1}, std::move(gens), bound, ceiling.value_or(bound), sets_workers);
    }
    std::vector<DensityPoint> profile;
    if (!sets_density.empty()) {
      std::vector<std::uint64_t> cps;
      std::stringstream ss(sets_density);
      std::string item;
      while (std::getline(ss, item, ',')) cps.push_back(to_u64(item, "--density checkpoint"));
      profile = density_profile(s, cps);
    }
    if (sets_format == "csv") {
      emit(out, sets_output, profile.empty() ? report::members_csv(s) : report::density_csv(profile));
    } else {
      std::ostringstream os;
      os << "preset: " << sets_preset << "\n";
      os << "bound: " << s.bound << "\n";
      os << "ceiling: " << s.ceiling << "\n";
      os << "members: " << s.members.size() << "\n";
      os << "explored: " << s.explored << "\n";
      os << "exceeded ceiling: " << (s.exceeded_ceiling ? "yes" : "no") << "\n";
      os << "complete: " << (s.complete ? "yes" : "no (values above the ceiling were discarded)") << "\n";
      for (const auto& p : profile) {
        os << "density at " << p.checkpoint << ": " << p.count << "/" << p.checkpoint << " = "
           << p.density.to_decimal(6) << "\n";
      }
      if (s.members.size() <= 200) {
        os << "list:";
        for (const auto m : s.members) os << ' ' << m;
        os << "\n";
      }
      emit(out, sets_output, os.str());
    }
  });

  // orbit
  auto* orbit = app.add_subcommand("orbit", "orbit of n under the Collatz permutation U");
  std::string orbit_n, orbit_format = "text";
  LimitFlags orbit_limits;
  orbit->add_option("--n", orbit_n)->required();
  orbit->add_option("--format", orbit_format)->check(CLI::IsMember({"text", "csv", "json"}))->capture_default_str();
  add_limits(orbit, orbit_limits);
  orbit->callback([&] {
    const Trajectory t = permutation_orbit(parse_natural(orbit_n), orbit_limits.limits());
    const GeneralizedCollatzMap u = permutation_u_map();
    if (orbit_format == "csv") out << report::trajectory_csv(t);
    else if (orbit_format == "json") out << dump(report::trajectory_json(t, u));
    else out << trajectory_text(t, u);
    code = exit_for(t.outcome);
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const LimitExceeded& e) {
    err << "unresolved: " << e.what() << "\n";
    return kUnresolved;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return code;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace collatz::cli
