// lenslat: command-line front end.
//
// Exit codes: 0 success / verified, 1 obstruction or violation found,
// 2 usage or input error (including arithmetic overflow), 3 internal
// inconsistency (e.g. two independent computations disagree).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lenslat/io.hpp"
#include "lenslat/lenslat.hpp"

namespace {

using namespace lenslat;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kObstructed = 1;
constexpr int kUsage = 2;
constexpr int kInconsistent = 3;

struct InconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_json = false;

void emit(const json& j) { std::cout << j.dump() << "\n"; }

std::string vec_str(const std::vector<Int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

std::string matrix_str(const IntMatrix& m) {
  std::ostringstream os;
  for (const auto& row : m) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << std::setw(3) << row[j];
    os << "\n";
  }
  return os.str();
}

/// "1,1,2", "[1, 1, 2]" or "1 1 2".
std::vector<Int> parse_int_list(const std::string& text) {
  std::string t;
  for (char c : text) t += (c == ',' || c == '[' || c == ']') ? ' ' : c;
  std::istringstream in(t);
  std::vector<Int> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw std::invalid_argument("bad integer '" + tok + "' in list");
    out.push_back(v);
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_cf(Int p, Int q) {
  auto cf = neg_cf(p, q);
  if (g_json)
    emit({{"p", p}, {"q", q}, {"terms", cf.terms}});
  else
    std::cout << vec_str(cf.terms) << "\n";
  return kOk;
}

int cmd_lens_lattice(Int p, Int q) {
  LensSpace ls(p, q);
  auto lat = linear_lattice(ls);
  Int disc = discriminant(lat);
  auto summands = indecomposable_summands(lat, 64);
  if (disc != p || summands.size() != 1) throw InconsistencyError("linear lattice invariants disagree");
  if (g_json) {
    emit({{"p", p}, {"q", q}, {"gram", lat.gram()}, {"discriminant", disc}, {"summands", summands.size()}});
  } else {
    std::cout << ls.str() << " rank " << lat.rank() << ", discriminant " << disc << ", summands "
              << summands.size() << "\n"
              << matrix_str(lat.gram());
  }
  return kOk;
}

int cmd_realize(const std::string& text, std::size_t pad, std::size_t max_rank) {
  auto t0 = std::chrono::steady_clock::now();
  LensSum sum = LensSum::parse(text);
  RealizeOptions opt;
  opt.pad = pad;
  opt.max_rank = max_rank;
  opt.threads = default_threads();
  Realization r = is_changemaker_realizable(sum, opt);
  if (r.witness) {
    // re-verify the witness independently of the search
    std::vector<GramLattice> parts{connected_sum_lattice(sum)};
    if (pad > 0) parts.push_back(diagonal_lattice(pad));
    const IntMatrix& w = *r.isometry;
    const IntMatrix image = multiply(multiply(w, complement_lattice(*r.witness).gram()), transpose(w));
    if (image != direct_sum(parts).gram() || std::llabs(bareiss_determinant(w)) != 1)
      throw InconsistencyError("realization witness does not reproduce the lattice");
  } else if (r.candidates_tested == 0 && r.candidates_total != 0) {
    throw InconsistencyError("empty certificate");
  }
  if (g_json) {
    json j = r;
    j["input"] = sum;
    j["pad"] = pad;
    j["seconds"] = seconds_since(t0);
    emit(j);
  } else if (r.witness) {
    std::cout << "witness sigma=" << vec_str(r.witness->sigma()) << " (norm " << r.norm << ", rank "
              << r.search_rank << "), candidates=" << r.candidates_tested << " of " << r.candidates_total << "\n";
  } else {
    std::cout << "none (obstructed), candidates=" << r.candidates_tested << " (norm " << r.norm << ", rank "
              << r.search_rank << ")\n";
  }
  return kOk;
}

int cmd_enum_cm(Int norm, std::size_t rank) {
  auto list = enumerate_changemakers(norm, rank);
  for (const auto& cm : list) {
    if (g_json)
      emit(cm);
    else
      std::cout << vec_str(cm.sigma()) << "\n";
  }
  if (!g_json) std::cout << list.size() << " changemakers\n";
  return kOk;
}

std::string sigma_key(const std::vector<Int>& v) { return vec_str(v); }

int cmd_summand_scan(Int min_norm, Int max_norm, bool with_zeros, const std::string& out_path) {
  std::set<std::string> done;
  std::ofstream out;
  std::uint64_t scanned = 0, skipped = 0, over_two = 0;
  std::size_t worst = 0;
  if (!out_path.empty()) {
    std::string text;
    {
      std::ifstream prev(out_path, std::ios::binary);
      text.assign(std::istreambuf_iterator<char>(prev), std::istreambuf_iterator<char>());
    }
    // Complete records are kept; a torn tail from an interrupted run is cut
    // off and its record redone.
    std::size_t keep = 0, pos = 0;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string::npos) break;
      std::string line = text.substr(pos, nl - pos);
      if (!line.empty()) {
        json rec;
        try {
          rec = json::parse(line);
          done.insert(sigma_key(rec.at("sigma").get<std::vector<Int>>()));
        } catch (const std::exception&) {
          break;
        }
        auto n = rec.value("summands", std::size_t{0});
        worst = std::max(worst, n);
        auto sig = rec.at("sigma").get<std::vector<Int>>();
        auto zeros = static_cast<std::size_t>(std::count(sig.begin(), sig.end(), Int{0}));
        if (n - zeros > 2) ++over_two;
      }
      pos = nl + 1;
      keep = pos;
    }
    if (keep < text.size()) std::filesystem::resize_file(out_path, keep);
    out.open(out_path, std::ios::app);
    if (!out) throw std::invalid_argument("cannot open " + out_path);
  }
  for (Int p = min_norm; p <= max_norm; ++p) {
    for (std::size_t r = 1; r <= static_cast<std::size_t>(p); ++r) {
      for (const auto& cm : enumerate_changemakers(p, r)) {
        if (!with_zeros && cm.sigma()[0] == 0) continue;
        if (done.count(sigma_key(cm.sigma()))) {
          ++skipped;
          continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        auto comp = complement_lattice(cm);
        auto parts = indecomposable_summands(comp, 64);
        Int disc = discriminant(comp);
        if (disc != p) throw InconsistencyError("complement discriminant differs from norm");
        std::vector<std::size_t> ranks;
        for (const auto& s : parts) ranks.push_back(s.rank());
        json rec{{"sigma", cm.sigma()}, {"norm", p},          {"rank", r},
                 {"summands", parts.size()}, {"summand_ranks", ranks}, {"disc", disc},
                 {"seconds", seconds_since(t0)}};
        ++scanned;
        worst = std::max(worst, parts.size());
        std::size_t effective = parts.size() - (with_zeros ? cm.leading_zeros() : 0);
        if (effective > 2) ++over_two;
        if (out.is_open()) {
          out << rec.dump() << "\n";
          out.flush();
        }
        if (g_json && !out.is_open()) emit(rec);
      }
    }
  }
  json summary{{"scanned", scanned},       {"skipped", skipped}, {"max_summands", worst},
               {"counterexamples", over_two}, {"min_norm", min_norm}, {"max_norm", max_norm},
               {"with_zeros", with_zeros}};
  if (g_json)
    emit(summary);
  else
    std::cout << "scanned " << scanned << " changemakers (skipped " << skipped << "), max summands " << worst
              << ", counterexamples to the two-summand bound: " << over_two << "\n";
  return over_two == 0 ? kOk : kObstructed;
}

void print_table(const CorrectionTable& t, const std::string& title) {
  std::cout << title << " p=" << t.p << "\n";
  for (Int i = 0; i < t.p; ++i) std::cout << "  d(" << i << ") = " << t.at(i) << "\n";
}

int cmd_dinv(Int p, Int q, bool sharp) {
  LensSpace ls(p, q);
  auto table = d_lens(ls);
  if (!table.conjugation_symmetric()) throw InconsistencyError("correction table is not conjugation symmetric");
  std::optional<CorrectionTable> sharp_table;
  if (sharp) {
    sharp_table = d_lens_sharp(ls);
    if (!(*sharp_table == table)) throw InconsistencyError("recursion and sharp plumbing disagree for " + ls.str());
  }
  if (g_json) {
    json j{{"lens", ls}, {"table", table}};
    if (sharp) j["sharp_agrees"] = true;
    emit(j);
  } else {
    print_table(table, ls.str());
    if (sharp) std::cout << "sharp plumbing agrees on all " << p << " classes\n";
  }
  return kOk;
}

int cmd_dinv_sum(const std::string& text) {
  LensSum sum = LensSum::parse(text);
  auto t = d_connected_sum(sum);
  if (g_json)
    emit({{"input", sum}, {"table", t}, {"labels", uses_crt(sum) ? "crt" : "mixed-radix"}});
  else
    print_table(t, sum.str());
  return kOk;
}

int cmd_torsion(const std::string& text) {
  AlexanderPoly poly(parse_int_list(text));
  auto rep = torsion_coeffs(poly);
  if (g_json) {
    emit(rep);
  } else {
    std::cout << "t=" << vec_str(rep.profile.t) << " g=" << rep.profile.g << " f="
              << (rep.profile.f ? std::to_string(*rep.profile.f) : std::string("none")) << "\n";
    for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
  }
  return rep.ok() ? kOk : kObstructed;
}

int cmd_lemma9(const std::string& sigma_text, Int box, const std::string& profile_text, Int g) {
  Changemaker cm(parse_int_list(sigma_text));
  TorsionProfile prof;
  if (profile_text.empty()) {
    prof = cm_torsion_profile(cm, box);
  } else {
    prof.t = parse_int_list(profile_text);
    prof.g = g >= 0 ? g : static_cast<Int>(prof.t.size());
    prof.f = first_index_of_one(prof.t);
  }
  auto rep = check_lemma9(cm, prof, box);
  bool ok = rep.status == Lemma9Report::Status::kPassed;
  if (g_json) {
    json j = rep;
    j["profile"] = prof;
    j["sigma"] = cm.sigma();
    emit(j);
  } else {
    std::cout << "sigma=" << vec_str(cm.sigma()) << " p=" << cm.norm() << " profile t=" << vec_str(prof.t)
              << " g=" << prof.g << " box=" << box << "\n";
    std::cout << "status: " << to_string(rep.status) << "\n";
    for (const auto& c : rep.classes)
      std::cout << "  i=" << c.i << " max c^2+(n+1)-8 = " << c.best << " bound " << c.bound
                << (c.equality ? " (equality, witness " + vec_str(c.witness) + ")" : "") << "\n";
    if (ok) std::cout << (rep.equality_everywhere() ? "equality attained in every class\n" : "inequality holds\n");
  }
  return ok ? kOk : kObstructed;
}

int cmd_verify_figure1(const std::string& left_path) {
  PlumbingForest left = figure1_left();
  if (!left_path.empty()) {
    std::ifstream in(left_path);
    if (!in) throw std::invalid_argument("cannot open " + left_path);
    std::stringstream ss;
    ss << in.rdbuf();
    left = PlumbingForest::parse(ss.str());
  }
  auto rep = verify_figure1(left);
  if (g_json) {
    emit(rep);
  } else {
    for (const auto& m : rep.transcript) std::cout << "move: " << m << "\n";
    for (const auto& c : rep.checks)
      std::cout << (c.ok ? "  ok   " : "  FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    if (rep.passed())
      std::cout << "pass: summands " << rep.right_summands->str() << ", |H1|=" << rep.h1_right << "\n";
    else
      std::cout << "mismatch: left diagram does not reduce to the right one\n";
  }
  return rep.passed() ? kOk : kObstructed;
}

int cmd_slope_check(Int p, Int q, Int g, Int m) {
  auto v = slope_bound_check(p, q, g, m);
  if (g_json)
    emit({{"p", p}, {"q", q}, {"g", g}, {"m", m}, {"verdict", to_string(v)}});
  else
    std::cout << p << "/" << q << " vs 2g-1 = " << 2 * g - 1 << ": " << to_string(v) << "\n";
  return v == SlopeVerdict::kViolation ? kObstructed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact changemaker / lens-space lattice toolkit"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "Emit JSON lines instead of tables");

  Int p = 0, q = 0, g = -1, m = 0, norm = 0, box = 5, min_norm = 1, max_norm = 0;
  std::size_t rank = 0, pad = 0, max_rank = kDefaultMaxRank;
  bool sharp = false, with_zeros = false;
  std::string text, out_path, profile_text, left_path;
  std::function<int()> run;

  auto* cf = app.add_subcommand("cf", "Negative continued fraction of p/q");
  cf->add_option("p", p)->required();
  cf->add_option("q", q)->required();
  cf->callback([&] { run = [&] { return cmd_cf(p, q); }; });

  auto* ll = app.add_subcommand("lens-lattice", "Linear lattice of L(p,q)");
  ll->add_option("p", p)->required();
  ll->add_option("q", q)->required();
  ll->callback([&] { run = [&] { return cmd_lens_lattice(p, q); }; });

  auto* rz = app.add_subcommand("realize", "Search changemaker embeddings of a lens-sum lattice");
  rz->add_option("lens-sum", text, "e.g. 2/1+3/2+5/4")->required();
  rz->add_option("--pad", pad, "Extra zero coordinates (0-3)")->capture_default_str();
  rz->add_option("--max-rank", max_rank)->capture_default_str();
  rz->callback([&] { run = [&] { return cmd_realize(text, pad, max_rank); }; });

  auto* ec = app.add_subcommand("enum-cm", "List changemakers of a given norm and rank");
  ec->add_option("--norm", norm)->required();
  ec->add_option("--rank", rank)->required();
  ec->callback([&] { run = [&] { return cmd_enum_cm(norm, rank); }; });

  auto* ss = app.add_subcommand("summand-scan", "Count indecomposable summands of changemaker complements");
  ss->add_option("--max-norm", max_norm)->required();
  ss->add_option("--min-norm", min_norm)->capture_default_str();
  ss->add_flag("--with-zeros", with_zeros, "Include changemakers with leading zeros");
  ss->add_option("--out", out_path, "JSON-lines file; existing records are skipped");
  ss->callback([&] { run = [&] { return cmd_summand_scan(min_norm, max_norm, with_zeros, out_path); }; });

  auto* dv = app.add_subcommand("dinv", "Correction terms of L(p,q)");
  dv->add_option("p", p)->required();
  dv->add_option("q", q)->required();
  dv->add_flag("--sharp", sharp, "Cross-check against the sharp plumbing");
  dv->callback([&] { run = [&] { return cmd_dinv(p, q, sharp); }; });

  auto* ds = app.add_subcommand("dinv-sum", "Correction terms of a connected sum");
  ds->add_option("lens-sum", text)->required();
  ds->callback([&] { run = [&] { return cmd_dinv_sum(text); }; });

  auto* tc = app.add_subcommand("torsion", "Torsion coefficients from a_{-g},...,a_g");
  tc->add_option("coeffs", text)->required();
  tc->callback([&] { run = [&] { return cmd_torsion(text); }; });

  auto* l9 = app.add_subcommand("lemma9", "Characteristic-covector inequality for a changemaker");
  l9->add_option("--sigma", text)->required();
  l9->add_option("--box", box)->capture_default_str();
  l9->add_option("--profile", profile_text, "t_0,t_1,... (default: derived from sigma)");
  l9->add_option("--g", g, "genus for --profile (default: its length)");
  l9->callback([&] { run = [&] { return cmd_lemma9(text, box, profile_text, g); }; });

  auto* vf = app.add_subcommand("verify-figure1", "Slam-dunk reduction of the two surgery diagrams");
  vf->add_option("--left", left_path, "Forest file replacing the built-in left diagram");
  vf->callback([&] { run = [&] { return cmd_verify_figure1(left_path); }; });

  auto* sc = app.add_subcommand("slope-check", "Is p/q > 2g-1 for an m-summand surgery?");
  sc->add_option("p", p)->required();
  sc->add_option("q", q)->required();
  sc->add_option("g", g)->required();
  sc->add_option("m", m)->required();
  sc->callback([&] { run = [&] { return cmd_slope_check(p, q, g, m); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return run();
  } catch (const InconsistencyError& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kInconsistent;
  } catch (const std::logic_error& e) {
    // invalid_argument / domain_error: bad input; other logic errors are ours
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::domain_error*>(&e)) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return kInconsistent;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInconsistent;
  }
}
