// Walks through the linear-demand example with c_r = 0.6 and c_s = 0.4.

#include <cstdio>

#include "srbg/srbg.hpp"

using namespace srbg;

int main() {
  Costs costs{0.6, 0.4, 0.5, DemandCurve::linear()};
  auto t = threshold_fees(costs);
  std::printf("p_rstar %.6f  c_sstar %.6f\n", t.p_rstar, t.c_sstar);
  std::printf("alpha_sstar %.6f  alpha_opt %.6f  alpha_rdagger %.6f  alpha_rstar %.6f  alpha_sdagger %.6f\n",
              t.alpha_sstar, t.alpha_opt, t.alpha_rdagger, t.alpha_rstar, t.alpha_sdagger);

  for (double a : {0.1, 0.3, 0.45, 0.6}) {
    Landscape l = landscape(at_alpha(costs, a), t);
    std::printf("alpha %.2f:", a);
    for (const auto& o : refined_outcomes(l))
      std::printf("  %s [%.4f, %.4f]", to_string(o.label), o.price_lo, o.price_hi);
    std::printf("\n");
  }

  FeeGame fg(costs);
  for (auto rho : {StrategyProfile::low(), StrategyProfile::high()}) {
    auto s = alpha_star(fg, rho);
    std::printf("rho %-4s alpha* %.6f  retailer %.6f  seller %.6f\n", to_string(rho.kind), s.alpha_star, s.retailer_payoff,
                s.seller_payoff);
  }

  auto full = solve_full_game(fg, 0.15, StrategyProfile::high());
  std::printf("delta 0.15: alpha_max %.6f  alpha*(o) %.6f  leaving payoff %.6f\n", full.alpha_max, full.alpha_star_o,
              full.leaving_seller_payoff);

  auto cell = verify::verify_cell(costs, t, 0.45, oracle::GridSpec{});
  std::printf("oracle at alpha 0.45: %s\n", verify::to_string(cell.status));
}
