#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "anonmech/anonmech.hpp"

namespace anonmech::cli {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string command;
  std::string market_path;
  std::string profile_path;
  std::string mechanism_path;
  std::string out_dir = "out";
  std::string mode = "rational";
  std::string tol;  // empty: the mode's default
  std::size_t starts = 16;
  std::size_t sweeps = 100;
  std::uint64_t seed = 1;
  std::string levels = "0,1/4,1/2,3/4,1";
  std::size_t max_periods = 3;
  std::size_t max_atoms = 3;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <class S>
std::string show(const S& x) {
  std::string s = Scalar<S>::format(x);
  if constexpr (Scalar<S>::exact) {
    if (x.get_den() != 1) s += " (" + Scalar<double>::format(to_double(x)) + ")";
  }
  return s;
}

std::vector<Rational> parse_levels(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

template <class S>
class Runner {
 public:
  Runner(RunConfig cfg, std::ostream& out)
      : cfg_(std::move(cfg)), out_(out), market_(load_market(cfg_.market_path)), ev_(market_) {
    tol_ = cfg_.tol.empty() ? Scalar<S>::default_tol() : scalar_cast<S>(parse_rational(cfg_.tol));
    if (!(tol_ > 0)) throw UsageError("--tol must be positive");
    if (cfg_.starts < 1) throw UsageError("--starts must be at least 1");
  }

  int dispatch() {
    if (cfg_.command == "solve") return solve();
    if (cfg_.command == "eval") return eval();
    if (cfg_.command == "verify") return verify_cmd();
    if (cfg_.command == "oracle") return oracle();
    if (cfg_.command == "compare") return compare();
    throw UsageError("unknown command " + cfg_.command);
  }

 private:
  void write(const std::string& name, const std::string& content) {
    fs::create_directories(cfg_.out_dir);
    std::ofstream f(fs::path(cfg_.out_dir) / name);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(cfg_.out_dir) / name).string());
    f << content;
  }

  AscentOptions<S> ascent_options() const {
    AscentOptions<S> o;
    o.starts = cfg_.starts;
    o.max_sweeps = cfg_.sweeps;
    o.tol = tol_;
    o.seed = cfg_.seed;
    return o;
  }

  OracleGrid<S> grid(const std::vector<Rational>& levels) const {
    OracleGrid<S> g;
    g.levels.clear();
    for (const auto& q : levels) g.levels.push_back(scalar_cast<S>(q));
    g.max_periods = cfg_.max_periods;
    g.max_atoms = cfg_.max_atoms;
    g.validate();
    return g;
  }

  void print_menu(const PricedMechanism<S>& mech) {
    for (std::size_t t = 0; t < mech.periods.size(); ++t) {
      const auto& m = mech.periods[t];
      out_ << "  period " << (t + 1) << ": " << to_string(m.mode);
      if (m.offers_high()) {
        out_ << ", price " << show(*m.p_high) << " for v " << (m.high_inclusive ? ">= " : "> ")
             << Scalar<S>::format(*m.q_high);
      }
      if (m.has_lottery()) {
        out_ << ", lottery of " << show(*m.lottery_quantity) << " units at " << show(*m.per_winner_price)
             << " per winner, service probability " << show(*m.service_prob);
      }
      out_ << '\n';
    }
  }

  std::string run_header() const {
    std::ostringstream s;
    s << "command=" << cfg_.command << '\n' << "market=" << cfg_.market_path << '\n';
    return s.str();
  }

  int solve() {
    const auto opts = ascent_options();
    auto report = coordinate_ascent<S>(market_, opts);
    auto mech = extract(ev_, report.profile);
    auto check = verify(ev_, report.profile, mech, tol_);

    write("profile.json", profile_to_json(report.profile));
    write("mechanism.json", mechanism_to_json(mech));
    write("report.csv", evaluation_csv(ev_.instance(), ev_.evaluate(report.profile)));
    write("price_path.csv", price_path_csv(mech));
    write("run.txt", run_header() + solve_report_text(report, opts));
    write("verification.txt", verification_text(ev_.instance(), check));
    write("verification.csv", verification_csv(ev_.instance(), check.report));

    out_ << "revenue: " << show(report.revenue) << '\n';
    out_ << "inventory used: " << show(report.inventory_used) << (report.binding ? " (binding)" : "") << '\n';
    if (!report.converged) out_ << "warning: ascent hit the sweep limit before converging\n";
    out_ << "mechanism:\n";
    print_menu(mech);
    out_ << "verification: " << (check.pass ? "pass" : "FAIL") << '\n';
    for (const auto& v : check.violations) out_ << "  [" << v.check << "] " << v.message << '\n';
    out_ << "artifacts written to " << cfg_.out_dir << '\n';
    return check.pass ? 0 : 1;
  }

  int eval() {
    if (cfg_.profile_path.empty()) throw UsageError("eval needs --profile FILE");
    auto a = parse_profile<S>(read_file(cfg_.profile_path));
    auto e = ev_.evaluate(a);
    write("report.csv", evaluation_csv(ev_.instance(), e));
    out_ << "revenue: " << show(e.revenue) << '\n';
    out_ << "inventory used: " << show(e.inventory_used) << '\n';
    out_ << "welfare: " << show(e.welfare) << '\n';
    const auto& inv = ev_.instance().inventory;
    if (inv && e.inventory_used > *inv + tol_) out_ << "warning: profile exceeds the inventory cap\n";
    for (auto [t, i] : e.negative_payments) {
      out_ << "warning: negative payment at t=" << (t + 1) << " v=" << Scalar<S>::format(ev_.instance().atoms[i])
           << '\n';
    }
    return 0;
  }

  int verify_cmd() {
    if (cfg_.mechanism_path.empty()) throw UsageError("verify needs --mechanism FILE");
    auto mech = parse_mechanism<S>(read_file(cfg_.mechanism_path));
    VerifyResult<S> result = cfg_.profile_path.empty()
                                 ? verify(ev_, mech, tol_)
                                 : verify(ev_, parse_profile<S>(read_file(cfg_.profile_path)), mech, tol_);
    write("verification.txt", verification_text(ev_.instance(), result));
    write("verification.csv", verification_csv(ev_.instance(), result.report));
    out_ << verification_text(ev_.instance(), result);
    return result.pass ? 0 : 1;
  }

  int oracle() {
    auto g = grid(parse_levels(cfg_.levels));
    auto best = brute_force_optimal(ev_, g);
    write("oracle_profile.json", profile_to_json(best.profile));
    out_ << "oracle revenue: " << show(best.revenue) << '\n';
    out_ << "profiles checked: " << best.profiles_checked << '\n';
    out_ << "profile written to " << (fs::path(cfg_.out_dir) / "oracle_profile.json").string() << '\n';
    return 0;
  }

  int compare() {
    auto report = coordinate_ascent<S>(market_, ascent_options());
    std::string posted = "unavailable (instance exceeds oracle caps)";
    try {
      auto best = brute_force_optimal(ev_, grid({Rational(0), Rational(1)}));
      posted = show(best.revenue);
    } catch (const InstanceTooLarge&) {
    }
    std::string non_anonymous = "n/a (bounded inventory)";
    if (!ev_.instance().inventory) non_anonymous = show(non_anonymous_benchmark(ev_.instance()));

    std::ostringstream table;
    table << "anonymous optimum: " << show(report.revenue) << '\n'
          << "posted prices only: " << posted << '\n'
          << "non-anonymous benchmark: " << non_anonymous << '\n';
    write("compare.txt", table.str());
    out_ << table.str();
    return 0;
  }

  RunConfig cfg_;
  std::ostream& out_;
  Market market_;
  Evaluator<S> ev_;
  S tol_{};
};

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("market", cfg.market_path, "Market file (JSON)")->required();
  sub->add_option("--mode", cfg.mode, "Arithmetic: rational or float")->check(CLI::IsMember({"rational", "float"}));
  sub->add_option("--tol", cfg.tol, "Equality tolerance (default 1e-9 rational, 1e-7 float)");
  sub->add_option("--out", cfg.out_dir, "Output directory for artifacts");
}

void add_search(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--starts", cfg.starts, "Random restarts in addition to the all-zero and all-one starts");
  sub->add_option("--sweeps", cfg.sweeps, "Maximum coordinate sweeps per start");
  sub->add_option("--seed", cfg.seed, "Seed for the random restarts");
}

void add_grid(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--levels", cfg.levels, "Comma-separated oracle levels, e.g. 0,1/2,1");
  sub->add_option("--max-periods", cfg.max_periods, "Oracle cap on periods");
  sub->add_option("--max-atoms", cfg.max_atoms, "Oracle cap on atoms");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Revenue-optimal anonymous selling mechanisms: posted prices plus rationed lotteries"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* solve = app.add_subcommand("solve", "Optimize, extract the menu, verify it and write artifacts");
  add_common(solve, cfg);
  add_search(solve, cfg);

  auto* eval = app.add_subcommand("eval", "Evaluate a given allocation profile");
  add_common(eval, cfg);
  eval->add_option("--profile", cfg.profile_path, "Profile file (JSON)")->required();

  auto* verify = app.add_subcommand("verify", "Check a mechanism against buyer best responses");
  add_common(verify, cfg);
  verify->add_option("--mechanism", cfg.mechanism_path, "Mechanism file (JSON)")->required();
  verify->add_option("--profile", cfg.profile_path, "Profile the mechanism should implement");

  auto* oracle = app.add_subcommand("oracle", "Brute-force optimum over a level grid");
  add_common(oracle, cfg);
  add_grid(oracle, cfg);

  auto* compare = app.add_subcommand("compare", "Anonymous optimum vs posted prices vs per-cohort pricing");
  add_common(compare, cfg);
  add_search(compare, cfg);
  add_grid(compare, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (parse_numeric_mode(cfg.mode) == NumericMode::Rational) return Runner<Rational>(cfg, out).dispatch();
    return Runner<double>(cfg, out).dispatch();
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const ParseError& e) {
    err << "error: " << e.what();
    if (e.line() > 0) err << " (line " << e.line() << ')';
    err << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace anonmech::cli
