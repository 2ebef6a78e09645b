#include "towercalc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "towercalc/error.hpp"
#include "towercalc/harmonic_spaces.hpp"
#include "towercalc/static_operator.hpp"

namespace towercalc::cli {

namespace {

const char* kSchema = "towercalc/1";

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_input:
    case ErrorKind::dimension_mismatch:
    case ErrorKind::parse_error:
    case ErrorKind::unsupported_dimension:
      return kUsage;
    case ErrorKind::not_in_span:
    case ErrorKind::hypothesis_violation:
      return kCheckFailure;
    default:
      return kInternal;
  }
}

void error_record(std::ostream& err, const std::string& kind, const std::string& message) {
  err << nlohmann::json{{"schema", kSchema}, {"kind", "error"}, {"error", kind}, {"message", message}}.dump() << "\n";
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TowerError(ErrorKind::parse_error, "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw TowerError(ErrorKind::parse_error, path + ": " + e.what());
  }
}

void emit(const nlohmann::json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw TowerError(ErrorKind::invalid_input, "cannot write '" + path + "'");
  f << text;
}

Rational rational_arg(const std::string& s) { return parse_rational(s); }

// Exceptional-weight warning shared by weight-taking commands.
bool warn_exceptional(const Rational& s, int N, std::ostream& err) {
  if (!is_exceptional_weight(s, N)) return false;
  err << "warning: exceptional weight " << to_string(s) << ", theorems inapplicable\n";
  return true;
}

std::string csv_index(const TowerIndex& I) {
  return std::string(to_string(I.sign)) + "," + std::to_string(I.k) + "," + std::to_string(I.sigma) + "," +
         std::to_string(I.m);
}

// ---- build ----------------------------------------------------------------

struct BuildArgs {
  int N = 3;
  std::vector<int> qs;
  int sigma_max = 2;
  int floors = 3;
  std::string sign = "both";
  std::string out = "towers.json";
  bool parallel = false;
};

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
  require_odd_dimension(a.N);
  if (a.sigma_max < 0 || a.floors < 0) throw TowerError(ErrorKind::invalid_input, "bounds must be nonnegative");
  std::vector<int> qs = a.qs;
  if (qs.empty())
    for (int q = 0; q <= a.N; ++q) qs.push_back(q);
  std::vector<Sign> signs;
  if (a.sign == "both") signs = {Sign::plus, Sign::minus};
  else signs = {parse_sign(a.sign)};

  struct Job {
    int q;
    Sign sign;
    int sigma;
  };
  std::vector<Job> jobs;
  nlohmann::json skipped = nlohmann::json::array();
  for (int q : qs) {
    if (q < 0 || q > a.N) throw TowerError(ErrorKind::invalid_input, "rank q out of range");
    for (Sign s : signs)
      for (int sigma = 0; sigma <= a.sigma_max; ++sigma) {
        if (mu_or_zero(a.N, q, sigma) + mu_or_zero(a.N, q + 1, sigma) == 0) {
          skipped.push_back({{"q", q}, {"sign", to_string(s)}, {"sigma", sigma}, {"reason", "empty family"}});
          continue;
        }
        jobs.push_back({q, s, sigma});
      }
  }
  std::vector<TowerFamily> fams(jobs.size());
  const ExecPolicy policy = a.parallel ? ExecPolicy::parallel : ExecPolicy::serial;
  for_each_index(policy, static_cast<int>(jobs.size()), [&](int i) {
    fams[i] = build_tower_pair(a.N, jobs[i].q, jobs[i].sign, jobs[i].sigma, a.floors);
  });
  nlohmann::json families = nlohmann::json::array();
  for (const auto& f : fams) families.push_back(to_json(f));
  emit({{"schema", kSchema},
        {"kind", "tower-set"},
        {"N", a.N},
        {"floors", a.floors},
        {"sigma_max", a.sigma_max},
        {"families", families},
        {"skipped", skipped}},
       a.out, out);
  if (!a.out.empty() && a.out != "-") out << "wrote " << a.out << ": " << fams.size() << " families\n";
  (void)err;
  return kOk;
}

// ---- verify ---------------------------------------------------------------

int cmd_verify(const std::string& path, const std::string& report_path, bool structure, std::ostream& out) {
  const auto outcome = verify_document(read_json(path), structure);
  for (const auto& f : outcome.failures)
    out << "FAIL " << f.relation << " at " << f.location << (f.detail.empty() ? "" : ": " + f.detail) << "\n";
  if (!report_path.empty()) {
    std::ofstream r(report_path, std::ios::binary);
    if (!r) throw TowerError(ErrorKind::invalid_input, "cannot write '" + report_path + "'");
    r << outcome.report.dump(2) << "\n";
  }
  out << (outcome.ok ? "all checks passed" : std::to_string(outcome.failures.size()) + " check(s) failed") << " ("
      << outcome.report["checked"].get<std::size_t>() << " checks)\n";
  return outcome.ok ? kOk : kCheckFailure;
}

// ---- expand / classify ----------------------------------------------------

int cmd_expand(const std::string& input, int K, const std::vector<std::string>& weights, int m,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
  const MaxwellPair p = pair_from_json(read_json(input));
  TowerStore store(p.E.dimension());
  const ExpansionResult res = expand(p, K, store);
  nlohmann::json j = to_json(res);
  nlohmann::json mem = nlohmann::json::array();
  std::ostream& table = (out_path.empty() || out_path == "-") ? err : out;
  for (const auto& w : weights) {
    const Rational s = rational_arg(w);
    warn_exceptional(s, res.N, err);
    const auto rep = membership_filter(res, s, m);
    mem.push_back(to_json(rep));
    table << "weight s = " << to_string(s) << " (threshold -s - N/2 = " << to_string(rep.threshold)
          << "): " << (rep.in_space() ? "in" : "out") << "\n";
    if (!rep.offending.empty()) {
      table << "  side   index          degree  coeff\n";
      for (const auto& o : rep.offending)
        table << "  " << o.side << std::string(7 - std::min<std::size_t>(6, o.side.size()), ' ') << to_string(o.index)
              << std::string(15 - std::min<std::size_t>(14, to_string(o.index).size()), ' ') << o.degree
              << std::string(8 - std::min<std::size_t>(7, std::to_string(o.degree).size()), ' ')
              << to_string(o.coefficient) << "\n";
    }
  }
  j["membership"] = mem;
  emit(j, out_path, out);
  if (!res.in_span()) {
    err << "not in span: nonzero residual (K too small or input outside the tower span)\n";
    return kCheckFailure;
  }
  return kOk;
}

int cmd_classify(const std::string& input, const std::string& weight, bool use_H, std::optional<Lemma34Flags> flags,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
  const nlohmann::json doc = read_json(input);
  Form E;
  if (doc.contains("E")) {
    const MaxwellPair p = pair_from_json(doc);
    E = use_H ? p.H : p.E;
  } else {
    E = form_from_json(doc.contains("form") ? doc.at("form") : doc);
  }
  const Rational s = rational_arg(weight);
  warn_exceptional(s, E.dimension(), err);
  TowerStore store(E.dimension());
  const auto rep = lemma34_classify(E, s, store, flags);
  emit(to_json(rep), out_path, out);
  if (!rep.flags_agree) err << "asserted integrability flags disagree with the computed ones\n";
  return rep.flags_agree && rep.residual.is_zero() ? kOk : kCheckFailure;
}

// ---- indices / weights / hypotheses ---------------------------------------

int cmd_indices(int N, int q, int K, const std::string& weight, const std::string& role, int sigma_max,
                bool include_plus, const std::string& format, std::ostream& out, std::ostream& err) {
  const Rational s = rational_arg(weight);
  const bool exceptional = warn_exceptional(s, N, err);
  const IndexRole r = role == "R" ? IndexRole::R : IndexRole::D;
  std::optional<int> smax;
  if (sigma_max >= 0) smax = sigma_max;
  const auto idx = enumerate_excluded(N, q, K, s, !include_plus, r, smax);
  if (format == "csv") {
    out << "sign,k,sigma,m,degree\n";
    for (const auto& I : idx) out << csv_index(I) << "," << homogeneity_degree(I, N) << "\n";
    return kOk;
  }
  nlohmann::json list = nlohmann::json::array();
  for (const auto& I : idx) {
    auto j = to_json(I);
    j["degree"] = homogeneity_degree(I, N);
    list.push_back(j);
  }
  out << nlohmann::json{{"schema", kSchema},
                        {"kind", "excluded-indices"},
                        {"N", N},
                        {"q", q},
                        {"K", K},
                        {"s", to_string(s)},
                        {"role", to_string(r)},
                        {"exceptional_weight", exceptional},
                        {"empty", idx.empty()},
                        {"indices", list}}
             .dump(2)
      << "\n";
  return kOk;
}

int cmd_weights(int N, int count, const std::vector<std::string>& checks, const std::string& format,
                std::ostream& out) {
  require_odd_dimension(N);
  const auto ws = exceptional_weights(N, count);
  if (format == "csv") {
    out << "weight,exceptional\n";
    for (const auto& w : ws) out << to_string(w) << ",1\n";
    for (const auto& c : checks) out << to_string(rational_arg(c)) << "," << is_exceptional_weight(rational_arg(c), N) << "\n";
    return kOk;
  }
  nlohmann::json list = nlohmann::json::array();
  for (const auto& w : ws) list.push_back(to_string(w));
  nlohmann::json chk = nlohmann::json::array();
  for (const auto& c : checks) {
    const Rational s = rational_arg(c);
    chk.push_back({{"s", to_string(s)}, {"exceptional", is_exceptional_weight(s, N)}});
  }
  out << nlohmann::json{{"schema", kSchema}, {"kind", "exceptional-weights"}, {"N", N}, {"weights", list},
                        {"checks", chk}}
             .dump(2)
      << "\n";
  return kOk;
}

int cmd_hypotheses(const std::string& theorem, const HypothesisInput& in, std::ostream& out) {
  const auto rep = validate_hypotheses(parse_hypothesis(theorem), in);
  auto j = to_json(rep);
  j["schema"] = kSchema;
  j["kind"] = "hypotheses";
  out << j.dump(2) << "\n";
  return rep.ok() ? kOk : kCheckFailure;
}

// ---- iterate / recursion --------------------------------------------------

TowerProfile load_profile(const std::string& path, std::optional<int> N, std::optional<int> q,
                          const std::string& weight) {
  TowerProfile p;
  if (!path.empty()) {
    p = profile_from_json(read_json(path));
  } else {
    if (!N || !q || weight.empty()) throw TowerError(ErrorKind::invalid_input, "without --seed give --n, --q and --weight");
  }
  if (N) p.N = *N;
  if (q) p.q = *q;
  if (!weight.empty()) {
    p.s = rational_arg(weight);
    p.l2_weight = p.s;
  }
  return p;
}

int cmd_iterate(const TowerProfile& p, int power, const Rational& tau, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
  warn_exceptional(p.s, p.N, err);
  const auto [last, desc] = apply_L_power(p, power, tau);
  nlohmann::json steps = nlohmann::json::array();
  steps.push_back(to_json(p));
  TowerProfile cur = p;
  bool chain_ok = true;
  for (int i = 1; i <= power; ++i) {
    cur = apply_L_profile(cur, tau);
    steps.push_back(to_json(cur));
  }
  chain_ok = cur == last;
  const bool consistent = range_consistent(last, desc);
  emit({{"schema", kSchema},
        {"kind", "profile-chain"},
        {"tau", to_string(tau)},
        {"steps", steps},
        {"range", to_json(desc)},
        {"composition_matches_power", chain_ok},
        {"range_consistent", consistent}},
       out_path, out);
  return chain_ok && consistent ? kOk : kCheckFailure;
}

int cmd_recursion(const TowerProfile& p, int power, const std::string& out_path, std::ostream& out) {
  std::map<TowerIndex, Rational> f, g;
  for (const auto& [I, c] : p.f) {
    if (c.symbolic()) throw TowerError(ErrorKind::invalid_input, "recursion needs rational seed coefficients");
    f[I] = c.scale;
  }
  for (const auto& [J, c] : p.g) {
    if (c.symbolic()) throw TowerError(ErrorKind::invalid_input, "recursion needs rational seed coefficients");
    g[J] = c.scale;
  }
  TowerStore store(p.N);
  const auto rep = verify_recursion(p.N, p.q, f, g, power, store);
  auto j = to_json(rep);
  j["schema"] = kSchema;
  j["kind"] = "recursion-report";
  emit(j, out_path, out);
  return rep.ok() ? kOk : kCheckFailure;
}

// ---- dims / alpha / compose -----------------------------------------------

int cmd_dims(int N, std::vector<int> qs, int sigma_max, bool computed, const std::string& format, std::ostream& out) {
  require_odd_dimension(N);
  if (qs.empty())
    for (int q = 0; q <= N; ++q) qs.push_back(q);
  nlohmann::json rows = nlohmann::json::array();
  if (format == "csv") out << "q,sigma,mu" << (computed ? ",computed" : "") << "\n";
  for (int q : qs)
    for (int sigma = 0; sigma <= sigma_max; ++sigma) {
      const int mu_cf = mu_closed_form(N, q, sigma);
      nlohmann::json row = {{"q", q}, {"sigma", sigma}, {"mu", mu_cf}};
      int c = -1;
      if (computed) {
        c = mu(N, q, sigma);
        row["computed"] = c;
      }
      if (format == "csv") out << q << "," << sigma << "," << mu_cf << (computed ? "," + std::to_string(c) : "") << "\n";
      rows.push_back(row);
    }
  if (format != "csv")
    out << nlohmann::json{{"schema", kSchema}, {"kind", "multiplicities"}, {"N", N}, {"rows", rows}}.dump(2) << "\n";
  return kOk;
}

int cmd_alpha(int N, int q, const std::string& sign, int sigma, int k_max, const std::string& format, std::ostream& out) {
  require_odd_dimension(N);
  const Sign sg = parse_sign(sign);
  bool all = true;
  nlohmann::json rows = nlohmann::json::array();
  if (format == "csv") out << "k,recursion,closed_form,agree\n";
  for (int k = 0; k <= k_max; ++k) {
    const Rational a = alpha(sg, q, sigma, k, N);
    const Rational b = alpha_closed_form(sg, q, sigma, k, N);
    all = all && a == b;
    if (format == "csv") out << k << "," << to_string(a) << "," << to_string(b) << "," << (a == b) << "\n";
    rows.push_back({{"k", k}, {"recursion", to_string(a)}, {"closed_form", to_string(b)}, {"agree", a == b}});
  }
  if (format != "csv")
    out << nlohmann::json{{"schema", kSchema}, {"kind", "alpha"}, {"N", N}, {"q", q}, {"sign", sign},
                          {"sigma", sigma}, {"rows", rows}}
               .dump(2)
        << "\n";
  return all ? kOk : kCheckFailure;
}

std::pair<TowerIndex, Rational> parse_term(const std::string& text) {
  const auto eq = text.rfind('=');
  if (eq == std::string::npos) return {parse_index(text), Rational(1)};
  return {parse_index(text.substr(0, eq)), parse_rational(text.substr(eq + 1))};
}

int cmd_compose(int N, int q, const std::vector<std::string>& d_terms, const std::vector<std::string>& r_terms,
                const std::string& weight, const std::string& out_path, std::ostream& out) {
  require_odd_dimension(N);
  if (!weight.empty()) {
    TowerProfile p;
    p.N = N;
    p.q = q;
    p.s = rational_arg(weight);
    p.l2_weight = p.s;
    for (const auto& t : d_terms) {
      const auto [I, c] = parse_term(t);
      p.f[I] = {c, {}};
    }
    for (const auto& t : r_terms) {
      const auto [J, c] = parse_term(t);
      p.g[J] = {c, {}};
    }
    emit(to_json(p), out_path, out);
    return kOk;
  }
  TowerStore store(N);
  MaxwellPair p = zero_pair(N, q);
  for (const auto& t : d_terms) {
    const auto [I, c] = parse_term(t);
    store.family(q, I.sign, I.sigma, I.k);
    p.E += store.D(q, I) * c;
  }
  for (const auto& t : r_terms) {
    const auto [J, c] = parse_term(t);
    store.family(q, J.sign, J.sigma, J.k);
    p.H += store.R(q + 1, J) * c;
  }
  emit(to_json(p), out_path, out);
  return kOk;
}

}  // namespace

TowerIndex parse_index(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != '(' && c != ')' && c != ' ') t += c;
  std::vector<std::string> parts;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 4) throw TowerError(ErrorKind::parse_error, "index '" + text + "' is not (sign,k,sigma,m)");
  try {
    TowerIndex I{parse_sign(parts[0]), std::stoi(parts[1]), std::stoi(parts[2]), std::stoi(parts[3])};
    if (I.k < 0 || I.sigma < 0 || I.m < 1) throw TowerError(ErrorKind::parse_error, "index '" + text + "' out of range");
    return I;
  } catch (const std::logic_error&) {
    throw TowerError(ErrorKind::parse_error, "index '" + text + "' is not (sign,k,sigma,m)");
  }
}

VerifyOutcome verify_document(const nlohmann::json& doc, bool structure) {
  std::vector<nlohmann::json> fams;
  const std::string kind = doc.value("kind", "");
  if (doc.value("schema", "") != kSchema) throw TowerError(ErrorKind::parse_error, "not a towercalc/1 document");
  if (kind == "tower-set") {
    for (const auto& f : doc.at("families")) fams.push_back(f);
  } else if (kind == "tower-family") {
    fams.push_back(doc);
  } else {
    throw TowerError(ErrorKind::parse_error, "expected a tower-set or tower-family document, got kind '" + kind + "'");
  }
  VerifyOutcome outcome;
  nlohmann::json per = nlohmann::json::array();
  std::size_t checked = 0;
  for (const auto& fj : fams) {
    const TowerFamily fam = family_from_json(fj);
    CheckReport rep = verify_relations(fam);
    if (structure) {
      rep.merge(verify_low_floor_harmonicity(fam));
      rep.merge(verify_odd_floor_structure(fam));
    }
    checked += rep.items.size();
    for (auto& f : rep.failures()) outcome.failures.push_back(f);
    nlohmann::json fr = to_json(rep);
    fr["q"] = fam.q;
    fr["sign"] = to_string(fam.sign);
    fr["sigma"] = fam.sigma;
    per.push_back(fr);
  }
  outcome.ok = outcome.failures.empty();
  outcome.report = {{"schema", kSchema}, {"kind", "verify-report"}, {"ok", outcome.ok},
                    {"checked", checked},  {"failures", outcome.failures.size()}, {"families", per}};
  return outcome;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"towercalc: exact tower forms, expansions and static Maxwell bookkeeping on R^N (N odd)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "towercalc 1.0");
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0 keeps the default)");

  BuildArgs b;
  auto* build = app.add_subcommand("build", "build tower families and write them as JSON");
  build->add_option("--n", b.N, "dimension (odd)")->required();
  build->add_option("--q", b.qs, "ranks (default: all)");
  build->add_option("--sigma-max", b.sigma_max, "largest sigma");
  build->add_option("--floors", b.floors, "highest floor K");
  build->add_option("--sign", b.sign, "plus, minus or both");
  build->add_option("--out", b.out, "output file, - for stdout");
  build->add_flag("--parallel", b.parallel, "build families in parallel");

  std::string v_path, v_report;
  bool v_no_structure = false;
  auto* verify = app.add_subcommand("verify", "re-check every relation of a tower file");
  verify->add_option("path", v_path, "tower-set or tower-family JSON")->required();
  verify->add_option("--report", v_report, "write the full JSON report here");
  verify->add_flag("--relations-only", v_no_structure, "skip harmonicity and odd-floor structure checks");

  std::string e_input, e_out;
  int e_K = 1, e_m = 0;
  std::vector<std::string> e_weights;
  auto* exp = app.add_subcommand("expand", "expand a Maxwell pair into tower forms");
  exp->add_option("--input", e_input, "maxwell-pair JSON")->required();
  exp->add_option("--floors", e_K, "K: the pair solves M^K (E, H) = 0")->required();
  exp->add_option("--weight", e_weights, "weights s for the membership filter");
  exp->add_option("--m", e_m, "Sobolev order recorded in the membership report");
  exp->add_option("--out", e_out, "output file");

  std::string c_input, c_weight, c_out;
  bool c_H = false, c_rot = false, c_div = false, c_assert = false;
  auto* cls = app.add_subcommand("classify", "classify the non-integrable part of a harmonic form");
  cls->add_option("--input", c_input, "form or maxwell-pair JSON")->required();
  cls->add_option("--weight", c_weight, "weight s >= -N/2")->required();
  cls->add_flag("--use-h", c_H, "classify H of a pair instead of E");
  cls->add_flag("--assert-flags", c_assert, "compare --rot-ok/--div-ok with the computed flags");
  cls->add_flag("--rot-ok", c_rot, "asserted: rot E in L^2_{s+1}");
  cls->add_flag("--div-ok", c_div, "asserted: div E in L^2_{s+1}");
  cls->add_option("--out", c_out, "output file");

  int i_N = 3, i_q = 0, i_K = 0, i_smax = -1;
  std::string i_weight, i_role = "D", i_format = "json";
  bool i_plus = false;
  auto* ind = app.add_subcommand("indices", "indices of height <= K whose tower forms are not in L^2_s");
  ind->add_option("--n", i_N, "dimension")->required();
  ind->add_option("--q", i_q, "rank")->required();
  ind->add_option("--floors", i_K, "largest height K");
  ind->add_option("--weight", i_weight, "weight s")->required();
  ind->add_option("--role", i_role, "D or R")->check(CLI::IsMember({"D", "R"}));
  ind->add_option("--sigma-max", i_smax, "largest sigma (needed with --include-plus)");
  ind->add_flag("--include-plus", i_plus, "also list plus-sign indices");
  ind->add_option("--format", i_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  int w_N = 3, w_count = 10;
  std::vector<std::string> w_check;
  std::string w_format = "json";
  auto* wts = app.add_subcommand("weights", "exceptional weights");
  wts->add_option("--n", w_N, "dimension")->required();
  wts->add_option("--count", w_count, "how many to list");
  wts->add_option("--check", w_check, "weights to test");
  wts->add_option("--format", w_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string h_thm, h_s, h_tau, h_hmax, h_t;
  int h_N = 3, h_j = 0;
  auto* hyp = app.add_subcommand("hypotheses", "check the weight conditions of thm41, def57 or thm510");
  hyp->add_option("--theorem", h_thm, "thm41, def57 or thm510")->required();
  hyp->add_option("--n", h_N, "dimension")->required();
  hyp->add_option("--weight", h_s, "s")->required();
  hyp->add_option("--tau", h_tau, "tau")->required();
  hyp->add_option("--j", h_j, "power j (thm510)");
  hyp->add_option("--h-max", h_hmax, "max homogeneity degree of the data indices");
  hyp->add_option("--t", h_t, "range weight t (thm510)");

  std::string it_seed, it_weight, it_tau, it_out;
  int it_N = 0, it_q = -1, it_power = 1;
  auto* iter = app.add_subcommand("iterate", "apply powers of L to a tower profile");
  iter->add_option("--seed", it_seed, "profile JSON (kind: profile)");
  iter->add_option("--n", it_N, "dimension (overrides the seed file)");
  iter->add_option("--q", it_q, "rank (overrides the seed file)");
  iter->add_option("--weight", it_weight, "weight s (overrides the seed file)");
  iter->add_option("--power", it_power, "power j")->required();
  iter->add_option("--tau", it_tau, "tau (default: smallest integer meeting the conditions, plus one)");
  iter->add_option("--out", it_out, "output file");

  std::string rc_seed, rc_out;
  int rc_power = 1;
  auto* rec = app.add_subcommand("recursion", "whole-space iteration with exact checks of the coefficient recursion");
  rec->add_option("--seed", rc_seed, "profile JSON with rational coefficients")->required();
  rec->add_option("--power", rc_power, "number of steps j")->required();
  rec->add_option("--out", rc_out, "output file");

  int d_N = 3, d_smax = 3;
  std::vector<int> d_qs;
  bool d_computed = false;
  std::string d_format = "json";
  auto* dims = app.add_subcommand("dims", "multiplicities mu_sigma^q");
  dims->add_option("--n", d_N, "dimension")->required();
  dims->add_option("--q", d_qs, "ranks (default: all)");
  dims->add_option("--sigma-max", d_smax, "largest sigma");
  dims->add_flag("--computed", d_computed, "also compute the seed spaces");
  dims->add_option("--format", d_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  int a_N = 3, a_q = 0, a_sigma = 0, a_kmax = 10;
  std::string a_sign = "plus", a_format = "json";
  auto* alp = app.add_subcommand("alpha", "tower coefficients: recursion against the closed form");
  alp->add_option("--n", a_N, "dimension")->required();
  alp->add_option("--q", a_q, "rank")->required();
  alp->add_option("--sign", a_sign, "plus or minus");
  alp->add_option("--sigma", a_sigma, "sigma");
  alp->add_option("--k-max", a_kmax, "largest height");
  alp->add_option("--format", a_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  int cp_N = 3, cp_q = 0;
  std::vector<std::string> cp_D, cp_R;
  std::string cp_weight, cp_out;
  auto* cmp = app.add_subcommand("compose", "write a Maxwell pair (or a profile with --weight) from tower terms");
  cmp->add_option("--n", cp_N, "dimension")->required();
  cmp->add_option("--q", cp_q, "rank of E")->required();
  cmp->add_option("--D", cp_D, "D^q term '(sign,k,sigma,m)=coeff'");
  cmp->add_option("--R", cp_R, "R^{q+1} term '(sign,k,sigma,m)=coeff'");
  cmp->add_option("--weight", cp_weight, "emit a profile at this weight instead of a pair");
  cmp->add_option("--out", cp_out, "output file");

  std::vector<std::string> argv_store = {"towercalc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_record(err, "usage", e.what());
    return kUsage;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*build) return cmd_build(b, out, err);
    if (*verify) return cmd_verify(v_path, v_report, !v_no_structure, out);
    if (*exp) return cmd_expand(e_input, e_K, e_weights, e_m, e_out, out, err);
    if (*cls) {
      std::optional<Lemma34Flags> flags;
      if (c_assert || c_rot || c_div) flags = Lemma34Flags{c_rot, c_div};
      return cmd_classify(c_input, c_weight, c_H, flags, c_out, out, err);
    }
    if (*ind) return cmd_indices(i_N, i_q, i_K, i_weight, i_role, i_smax, i_plus, i_format, out, err);
    if (*wts) return cmd_weights(w_N, w_count, w_check, w_format, out);
    if (*hyp) {
      HypothesisInput in;
      in.N = h_N;
      in.s = rational_arg(h_s);
      in.tau = rational_arg(h_tau);
      if (*hyp->get_option("--j")) in.j = h_j;
      if (!h_hmax.empty()) in.h_max = rational_arg(h_hmax);
      if (!h_t.empty()) in.t = rational_arg(h_t);
      return cmd_hypotheses(h_thm, in, out);
    }
    if (*iter) {
      std::optional<int> n, q;
      if (it_N > 0) n = it_N;
      if (it_q >= 0) q = it_q;
      const TowerProfile p = load_profile(it_seed, n, q, it_weight);
      Rational tau;
      if (!it_tau.empty()) {
        tau = rational_arg(it_tau);
      } else {
        // smallest integer above every lower bound of the power's conditions
        Rational lo = std::max(Rational(0), Rational(p.s - half(p.N)));
        lo = std::max(lo, Rational(Rational(it_power - 1) - p.s));
        if (auto h = p.h_max()) lo = std::max(lo, Rational(p.s + half(p.N) + *h));
        tau = Rational(floor_to_long(lo) + 1);
      }
      return cmd_iterate(p, it_power, tau, it_out, out, err);
    }
    if (*rec) return cmd_recursion(load_profile(rc_seed, std::nullopt, std::nullopt, ""), rc_power, rc_out, out);
    if (*dims) return cmd_dims(d_N, d_qs, d_smax, d_computed, d_format, out);
    if (*alp) return cmd_alpha(a_N, a_q, a_sign, a_sigma, a_kmax, a_format, out);
    if (*cmp) return cmd_compose(cp_N, cp_q, cp_D, cp_R, cp_weight, cp_out, out);
  } catch (const TowerError& e) {
    std::string msg = e.what();
    if (e.kind() == ErrorKind::unsupported_dimension && msg.find("even") == std::string::npos)
      msg = "even dimension unsupported: " + msg;
    error_record(err, to_string(e.kind()), msg);
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    error_record(err, "parse-error", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    error_record(err, "internal", e.what());
    return kInternal;
  }
  return kUsage;
}

}  // namespace towercalc::cli
