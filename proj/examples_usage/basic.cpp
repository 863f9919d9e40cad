#include <iostream>

#include "anosov/boundary.hpp"
#include "anosov/diagnostics.hpp"
#include "anosov/io.hpp"
#include "anosov/zoo.hpp"

using namespace anosov;

int main() {
  // a Schottky subgroup of SL(2,R) and its symmetric square in SL(3,R)
  const Representation j = fuchsian_free(2, 2.0);
  const Representation rho = lift_sym(j, 2);

  const Word g = Word::parse("aBab");
  std::cout << "word " << g.str() << "\n";
  const CartanVector mu = cartan(rho, g);
  const LyapunovVector lam = lyapunov(rho, g);
  std::cout << "mu     ";
  for (int i = 0; i < rho.dim(); ++i) std::cout << " " << mu[i];
  std::cout << "\nlambda ";
  for (int i = 0; i < rho.dim(); ++i) std::cout << " " << lam[i];
  std::cout << "\n";

  ScanOptions o;
  o.radius = 6;
  o.cyclicLength = 6;
  const std::vector<Report> reports{divergence_profile(rho, 1, o), qie_check(rho, o), ccartan_check(rho, 1, o),
                                    holder_report(rho, o)};
  for (const Report& r : reports) std::cout << r.criterion << ": " << to_string(r.verdict) << "\n";

  const LimitSample x = limit_point(rho, BoundaryRay::parse("|ab"), 20);
  std::cout << "limit point of (ab)^inf within " << x.errBound << "\n";

  std::cout << reports_json({reports[0]}).dump(2) << "\n";
}
