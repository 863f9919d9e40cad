#pragma once
//
// Command-line front end. run_cli is the whole program; the executable only
// forwards argv, which lets tests drive it in-process.
//

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "anosov/boundary.hpp"
#include "anosov/convex.hpp"
#include "anosov/diagnostics.hpp"
#include "anosov/errors.hpp"
#include "anosov/floyd.hpp"
#include "anosov/io.hpp"
#include "anosov/zoo.hpp"

namespace anosov {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitInconclusive = 3;

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

inline Vector parse_point(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.empty()) throw ParseError("point must be a comma-separated list of numbers");
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    try {
      v(static_cast<Eigen::Index>(i)) = std::stod(parts[i]);
    } catch (const std::logic_error&) {
      throw ParseError("bad coordinate '" + parts[i] + "'");
    }
  }
  return v;
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw PreconditionError("cannot write " + path);
  f << text;
}

inline void print_summary(const std::vector<Report>& reports, std::ostream& out) {
  out << std::setprecision(10);
  for (const auto& r : reports) {
    out << r.criterion << ": " << to_string(r.verdict) << "\n";
    for (const auto& [k, v] : r.verdicts) out << "  verdict " << k << " = " << to_string(v) << "\n";
    for (const auto& [k, v] : r.constants) out << "  " << k << " = " << v << "\n";
    for (const auto& [k, v] : r.witnesses) out << "  witness " << k << " = " << v << "\n";
    for (const auto& n : r.notes) out << "  note: " << n << "\n";
  }
}

/// Options shared by every reporting subcommand.
struct OutputOptions {
  unsigned threads = 1;
  std::string json;
  std::string csv;
  std::string svg;
  bool strict = false;
  double plateauTol = Tolerances{}.plateauTol;
  double slopeTol = Tolerances{}.slopeTol;
  int radius = 6;
  int cyclicLength = 8;

  ScanOptions scan() const {
    ScanOptions o;
    o.radius = radius;
    o.cyclicLength = cyclicLength;
    o.threads = threads;
    o.tol.plateauTol = plateauTol;
    o.tol.slopeTol = slopeTol;
    return o;
  }
};

inline void add_output_options(CLI::App* app, OutputOptions& o, bool scans = true) {
  app->add_option("--threads", o.threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app->add_option("--json", o.json, "Write the JSON report to FILE (stdout when no FILE)")->expected(0, 1);
  app->add_option("--csv", o.csv, "Write all tables as long-format CSV");
  app->add_option("--svg", o.svg, "Write an SVG scatter of all tables");
  app->add_flag("--strict", o.strict, "Exit with code 3 when any verdict is inconclusive");
  app->add_option("--plateau-tol", o.plateauTol, "Absolute plateau tolerance");
  app->add_option("--slope-tol", o.slopeTol, "Minimum fitted log slope");
  if (scans) {
    app->add_option("--radius", o.radius, "Word-metric ball radius");
    app->add_option("--cyclic-length", o.cyclicLength, "Maximal length of conjugacy-class representatives");
  }
}

inline int emit(const std::vector<Report>& reports, const OutputOptions& o, CLI::App* app, std::ostream& out) {
  const bool jsonGiven = app->count("--json") > 0;
  if (jsonGiven)
    write_text(o.json, reports_json(reports).dump(2) + "\n", out);
  else
    print_summary(reports, out);
  if (!o.csv.empty()) write_text(o.csv, reports_csv(reports), out);
  if (!o.svg.empty()) write_text(o.svg, reports_svg(reports), out);
  if (o.strict)
    for (const auto& r : reports)
      if (r.verdict == Verdict::Inconclusive) return kExitInconclusive;
  return kExitOk;
}

inline Representation build_zoo(const std::string& name, int rank, double t, const std::vector<double>& angles,
                                int dim) {
  if (name == "fuchsian-free") return fuchsian_free(rank, t, angles);
  if (name == "surface-octagon") return surface_octagon();
  if (name == "trivial") return trivial_rep(GroupModel::free(rank), dim);
  if (name == "unipotent") {
    Matrix u(2, 2);
    u << 1, 1, 0, 1;
    return Representation(GroupModel::free(1), {u});
  }
  if (name == "diagonal") {
    Matrix g = Matrix::Zero(3, 3);
    g.diagonal() << 2.0, 1.0, 1.0;
    return Representation(GroupModel::free(1), {g});
  }
  throw PreconditionError("unknown zoo representation '" + name +
                          "' (fuchsian-free, surface-octagon, trivial, unipotent, diagonal)");
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using detail::add_output_options;
  using detail::OutputOptions;
  CLI::App app{"Anosov-representation diagnostics on word-metric balls"};
  app.require_subcommand(1);

  // zoo build
  CLI::App* zoo = app.add_subcommand("zoo", "Build representations with known ground truth");
  CLI::App* zooBuild = zoo->add_subcommand("build", "Write a representation as JSON");
  zoo->require_subcommand(1);
  std::string zooName, zooOut = "-";
  int zooRank = 2, zooDim = 2, zooSym = 1;
  double zooT = 2.0, zooDeform = 0.0;
  std::uint64_t zooSeed = 1;
  std::vector<double> zooAngles;
  bool zooDual = false, zooDouble = false;
  zooBuild->add_option("name", zooName, "fuchsian-free | surface-octagon | trivial | unipotent | diagonal")->required();
  zooBuild->add_option("--rank", zooRank, "Free group rank");
  zooBuild->add_option("--t", zooT, "Translation strength of each generator");
  zooBuild->add_option("--angles", zooAngles, "Boundary angle of each attracting point");
  zooBuild->add_option("--dim", zooDim, "Dimension of the trivial representation");
  zooBuild->add_option("--sym", zooSym, "Compose with the q-th symmetric power");
  zooBuild->add_flag("--dual", zooDual, "Compose with the dual");
  zooBuild->add_flag("--double", zooDouble, "Replace rho by rho + rho");
  zooBuild->add_option("--deform", zooDeform, "Deformation magnitude");
  zooBuild->add_option("--seed", zooSeed, "Deformation seed");
  zooBuild->add_option("-o,--output", zooOut, "Output file (stdout by default)");

  // diagnose
  CLI::App* diag = app.add_subcommand("diagnose", "Run composite criteria over a ball");
  OutputOptions dOpt;
  add_output_options(diag, dOpt);
  std::string dRep, dRep2, dChecks = "divergence,qie,ccartan", dFloyd = "power:1", dWord = "e";
  int dIndex = 1, dSearch = 2;
  double dKappa = 1.0;
  diag->add_option("--rep", dRep, "Representation JSON")->required();
  diag->add_option("--rep2", dRep2, "Second representation (directsum, tensor)");
  diag->add_option("--checks", dChecks,
                   "Comma list of divergence, qie, ccartan, weakgap, propertyu, directsum, tensor, ugsp, "
                   "ugspgromov, gromov, holder, mulambda");
  diag->add_option("--index", dIndex, "Root or weight index");
  diag->add_option("--floyd", dFloyd, "Floyd function for ugsp");
  diag->add_option("--kappa", dKappa, "Exponent for ugspgromov");
  diag->add_option("--word", dWord, "Element for mulambda");
  diag->add_option("--search-radius", dSearch, "Search radius for mulambda");

  // limits
  CLI::App* limits = app.add_subcommand("limits", "Limit-map approximations");
  limits->require_subcommand(1);
  OutputOptions lOpt;
  std::string lRep, lRay, lRay2;
  std::size_t lDepth = 20;
  CLI::App* lExport = limits->add_subcommand("export", "Approximate xi(x) for a boundary ray");
  CLI::App* lTrans = limits->add_subcommand("transversality", "Compare transversality with the Gromov product");
  for (CLI::App* s : {lExport, lTrans}) {
    add_output_options(s, lOpt, false);
    s->add_option("--rep", lRep, "Representation JSON")->required();
    s->add_option("--depth", lDepth, "Prefix depth");
  }
  lExport->add_option("--ray", lRay, "Eventually periodic ray head|cycle")->required();
  lTrans->add_option("--x", lRay, "First ray head|cycle")->required();
  lTrans->add_option("--y", lRay2, "Second ray head|cycle")->required();

  // holder
  CLI::App* holder = app.add_subcommand("holder", "Hoelder exponent estimates of the limit map");
  OutputOptions hOpt;
  std::string hRep;
  add_output_options(holder, hOpt);
  holder->add_option("--rep", hRep, "Representation JSON")->required();

  // floyd
  CLI::App* floyd = app.add_subcommand("floyd", "Floyd metric and related checks");
  floyd->require_subcommand(1);
  OutputOptions fOpt;
  std::string fRep, fFunc = "exp:2", fG = "e", fH = "e";
  double fX = 0.0;
  CLI::App* fDist = floyd->add_subcommand("dist", "Ball-restricted Floyd distance");
  CLI::App* fCheck = floyd->add_subcommand("check", "Uniform gap summation and Floyd-Lipschitz checks");
  CLI::App* fKarl = floyd->add_subcommand("karlsson", "Karlsson tail bound G(x)");
  for (CLI::App* s : {fDist, fCheck, fKarl}) {
    add_output_options(s, fOpt);
    s->add_option("--f", fFunc, "Floyd function power:k | exp:c | table:v0,v1,...");
  }
  fDist->add_option("--rep", fRep, "Representation JSON (its group model is used)")->required();
  fDist->add_option("--from", fG, "First element");
  fDist->add_option("--to", fH, "Second element");
  fCheck->add_option("--rep", fRep, "Representation JSON")->required();
  fKarl->add_option("--x", fX, "Argument of G")->required();

  // hilbert
  CLI::App* hilbert = app.add_subcommand("hilbert", "Hilbert geometry of model convex domains");
  hilbert->require_subcommand(1);
  OutputOptions gOpt;
  std::string gDomain = "ball:2", gRep, gX, gY, gWord = "a", gX0;
  int gN = 50;
  bool gKlein = false;
  CLI::App* gDist = hilbert->add_subcommand("dist", "Hilbert distance between two points");
  CLI::App* gDisp = hilbert->add_subcommand("displacement", "Orbit displacement of an element");
  CLI::App* gCtl = hilbert->add_subcommand("control1", "Displacement against the extreme singular value gap");
  for (CLI::App* s : {gDist, gDisp, gCtl}) {
    add_output_options(s, gOpt);
    s->add_option("--domain", gDomain, "ball:d | simplex:d");
  }
  gDist->add_option("--x", gX, "Point as comma list")->required();
  gDist->add_option("--y", gY, "Point as comma list")->required();
  for (CLI::App* s : {gDisp, gCtl}) {
    s->add_option("--rep", gRep, "Representation JSON")->required();
    s->add_option("--x0", gX0, "Base point (domain centre by default)");
    s->add_flag("--klein", gKlein, "Act through sym^2 on the Klein disc (2x2 input)");
  }
  gDisp->add_option("--word", gWord, "Element");
  gDisp->add_option("--N", gN, "Number of iterations");

  // interval
  CLI::App* interval = app.add_subcommand("interval", "Search for elements with a prescribed ratio");
  OutputOptions iOpt;
  std::string iRep1, iRep2;
  long iP = 1, iQ = 1;
  double iDelta = 2.0;
  add_output_options(interval, iOpt);
  interval->add_option("--rep1", iRep1, "Numerator representation JSON")->required();
  interval->add_option("--rep2", iRep2, "Denominator representation JSON")->required();
  interval->add_option("--p", iP, "Target numerator");
  interval->add_option("--q", iQ, "Target denominator");
  interval->add_option("--delta", iDelta, "Budget constant");

  // gromov
  CLI::App* gromov = app.add_subcommand("gromov", "Gromov product comparability");
  OutputOptions rOpt;
  std::string rRep;
  int rAlpha = 1;
  add_output_options(gromov, rOpt);
  gromov->add_option("--rep", rRep, "Representation JSON")->required();
  gromov->add_option("--alpha", rAlpha, "Weight index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  }

  try {
    if (zooBuild->parsed()) {
      Representation rho = detail::build_zoo(zooName, zooRank, zooT, zooAngles, zooDim);
      if (zooSym > 1) rho = lift_sym(rho, zooSym);
      if (zooDual) rho = lift_dual(rho);
      if (zooDouble) rho = lift_sum(rho, rho);
      if (zooDeform != 0.0) rho = deform(rho, zooDeform, zooSeed);
      detail::write_text(zooOut, rep_json(rho).dump(2) + "\n", out);
      return kExitOk;
    }
    if (diag->parsed()) {
      const Representation rho = load_rep(dRep);
      const ScanOptions o = dOpt.scan();
      if (o.radius < 0) throw PreconditionError("radius must be >= 0, got " + std::to_string(o.radius));
      std::vector<Report> reports;
      auto second = [&]() {
        if (dRep2.empty()) throw PreconditionError("this check needs --rep2");
        return load_rep(dRep2);
      };
      for (const auto& c : detail::split(dChecks, ',')) {
        if (c == "divergence") reports.push_back(divergence_profile(rho, dIndex, o));
        else if (c == "qie") reports.push_back(qie_check(rho, o));
        else if (c == "ccartan") reports.push_back(ccartan_check(rho, dIndex, o));
        else if (c == "weakgap") reports.push_back(weak_gap_check(rho, dIndex, o));
        else if (c == "propertyu") reports.push_back(property_u_defect(rho.model(), o));
        else if (c == "directsum") reports.push_back(directsum_check(rho, second(), o));
        else if (c == "tensor") reports.push_back(tensor_check(rho, second(), o));
        else if (c == "ugsp") reports.push_back(ugsp_report(rho, FloydFunction::parse(dFloyd), o));
        else if (c == "ugspgromov") reports.push_back(ugsp_gromov_bounds(rho, dKappa, o));
        else if (c == "gromov") reports.push_back(gromov_comparability(rho, dIndex, o));
        else if (c == "holder") reports.push_back(holder_report(rho, o));
        else if (c == "mulambda") reports.push_back(mu_lambda_search(rho, Word::parse(dWord), dSearch, o.threads));
        else throw PreconditionError("unknown check '" + c + "'");
      }
      return detail::emit(reports, dOpt, diag, out);
    }
    if (lExport->parsed() || lTrans->parsed()) {
      const Representation rho = load_rep(lRep);
      Report r;
      auto record = [&](const std::string& tag, const LimitSample& s) {
        r.witnesses[tag + ".ray"] = s.ray.str();
        r.tables[tag + ".point"] = std::vector<double>(s.point.dir().data(), s.point.dir().data() + s.point.dim());
        if (s.hyperplane)
          r.tables[tag + ".hyperplaneNormal"] =
              std::vector<double>(s.hyperplane->normal().data(), s.hyperplane->normal().data() + s.hyperplane->dim());
        r.constants[tag + ".errBound"] = s.errBound;
        r.constants[tag + ".hyperErrBound"] = s.hyperErrBound;
      };
      r.parameters["depth"] = static_cast<double>(lDepth);
      if (lExport->parsed()) {
        r.criterion = "limits";
        const LimitSample s = limit_point(rho, BoundaryRay::parse(lRay), lDepth);
        record("x", s);
        r.verdict = Verdict::Consistent;
        return detail::emit({r}, lOpt, lExport, out);
      }
      r.criterion = "transversality";
      const Transversality t = transversality(rho, BoundaryRay::parse(lRay), BoundaryRay::parse(lRay2), lDepth);
      record("x", t.sx);
      record("y", t.sy);
      r.constants["direct"] = t.direct;
      r.constants["viaGromov"] = t.viaGromov;
      r.constants["tolerance"] = t.tolerance;
      r.verdict = t.agree ? Verdict::Consistent : Verdict::Inconsistent;
      return detail::emit({r}, lOpt, lTrans, out);
    }
    if (holder->parsed()) {
      const Representation rho = load_rep(hRep);
      return detail::emit({holder_report(rho, hOpt.scan())}, hOpt, holder, out);
    }
    if (fKarl->parsed()) {
      const FloydFunction f = FloydFunction::parse(fFunc);
      Report r;
      r.criterion = "karlsson";
      r.settings["floyd"] = f.name();
      r.parameters["x"] = fX;
      r.constants["G"] = karlsson_bound(f, fX);
      r.verdict = Verdict::Consistent;
      return detail::emit({r}, fOpt, fKarl, out);
    }
    if (fDist->parsed()) {
      const Representation rho = load_rep(fRep);
      const FloydFunction f = FloydFunction::parse(fFunc);
      Report r;
      r.criterion = "floyddist";
      r.settings["floyd"] = f.name();
      r.parameters["radius"] = fOpt.radius;
      r.witnesses["g"] = Word::parse(fG).str();
      r.witnesses["h"] = Word::parse(fH).str();
      r.constants["distance"] = floyd_distance(rho.model(), f, Word::parse(fG), Word::parse(fH), fOpt.radius);
      r.notes.push_back("shortest path restricted to the ball; nonincreasing in the radius");
      r.verdict = Verdict::Consistent;
      return detail::emit({r}, fOpt, fDist, out);
    }
    if (fCheck->parsed()) {
      const Representation rho = load_rep(fRep);
      const FloydFunction f = FloydFunction::parse(fFunc);
      const ScanOptions o = fOpt.scan();
      Report u = ugsp_report(rho, f, o);
      const FloydLipschitzResult l = floyd_lipschitz_check(rho, f, o.radius, o.threads);
      Report lr;
      lr.criterion = "floydlipschitz";
      lr.settings["floyd"] = f.name();
      lr.parameters["radius"] = o.radius;
      lr.constants["C"] = l.C;
      lr.constants["degenerate"] = static_cast<double>(l.degenerate);
      lr.constants["pairs"] = static_cast<double>(l.pairs);
      lr.witnesses["g"] = l.witnessG.str();
      lr.witnesses["h"] = l.witnessH.str();
      lr.verdict = std::isfinite(l.C) ? Verdict::Consistent : Verdict::Inconsistent;
      return detail::emit({u, lr}, fOpt, fCheck, out);
    }
    if (gDist->parsed()) {
      const ConvexDomain omega = ConvexDomain::parse(gDomain);
      Report r;
      r.criterion = "hilbertdist";
      r.settings["domain"] = omega.name();
      r.constants["distance"] = hilbert_distance(omega, detail::parse_point(gX), detail::parse_point(gY));
      r.verdict = Verdict::Consistent;
      return detail::emit({r}, gOpt, gDist, out);
    }
    if (gDisp->parsed() || gCtl->parsed()) {
      Representation rho = load_rep(gRep);
      if (gKlein) rho = klein_action(rho);
      const ConvexDomain omega = ConvexDomain::parse(gDomain);
      const Vector x0 = gX0.empty() ? omega.center() : detail::parse_point(gX0);
      Report r;
      r.settings["domain"] = omega.name();
      if (gDisp->parsed()) {
        r.criterion = "displacement";
        const Word g = Word::parse(gWord);
        const Displacement d = hilbert_displacement(rho, omega, g, x0, gN);
        r.witnesses["element"] = g.str();
        r.parameters["N"] = gN;
        r.constants["perOrbit"] = d.perOrbit;
        r.constants["stable"] = d.stable;
        r.constants["bracket"] = d.bracket;
        const LyapunovVector lam = lyapunov(rho, g);
        r.constants["halfEigenGap"] = 0.5 * (lam[0] - lam[rho.dim() - 1]);
        r.verdict = Verdict::Consistent;
        return detail::emit({r}, gOpt, gDisp, out);
      }
      const ScanOptions o = gOpt.scan();
      const Control1Result c = control1_check(rho, omega, x0, o.radius, o.threads, o.tol);
      r.criterion = "control1";
      r.parameters["radius"] = o.radius;
      r.parameters["plateauTol"] = o.tol.plateauTol;
      r.constants["kappa"] = c.kappa;
      r.constants["minSlack"] = c.minSlack;
      r.witnesses["kappa"] = c.witness.str();
      r.tables["runningKappa"] = c.perRadius;
      r.verdict = c.verdict;
      return detail::emit({r}, gOpt, gCtl, out);
    }
    if (interval->parsed()) {
      const Representation r1 = load_rep(iRep1), r2 = load_rep(iRep2);
      return detail::emit({interval_search(r1, r2, iP, iQ, iDelta, iOpt.scan())}, iOpt, interval, out);
    }
    if (gromov->parsed()) {
      const Representation rho = load_rep(rRep);
      return detail::emit({gromov_comparability(rho, rAlpha, rOpt.scan())}, rOpt, gromov, out);
    }
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace anosov
