#include <doctest.h>

#include <cmath>

#include "nozzleflow/errors.hpp"
#include "nozzleflow/schedule.hpp"

using namespace nozzleflow;
using doctest::Approx;

TEST_CASE("bullet arithmetic") {
  ViscositySchedule s;
  s.eps_list = {0.1};
  s.q = 3.0;
  s.beta = 3.0;
  CHECK(s.a(0.1) == Approx(-10.0));
  CHECK(s.b(0.1) == Approx(10.0));
  CHECK(s.delta(0.1) == Approx(1e-3));
  const auto rep = certify(s, NozzleProfile::constant(), GasLaw(2.0));
  CHECK(rep.entry("eps|b-a|").max == Approx(2.0));
  CHECK(rep.entry("delta/eps|A||a|^beta|A^((g-3)/(g-1))|").max == Approx(10.0));
  CHECK(rep.passed());
  CHECK_THROWS_AS((void)rep.entry("no such bullet"), ConfigError);
}

TEST_CASE("q = 1 + beta makes the beta bullet identically 1") {
  ViscositySchedule s;
  s.eps_list = {0.25, 0.1, 0.02, 0.004};
  s.beta = 4.0;
  s.q = 5.0;
  const auto rep = certify(s, NozzleProfile::constant(), GasLaw(2.0));
  for (double v : rep.entry("delta/eps|A||a|^beta|A^((g-3)/(g-1))|").values) CHECK(v == Approx(1.0).epsilon(1e-12));
  CHECK(rep.passed());
}

TEST_CASE("default ladders") {
  const auto c = make_default(NozzleProfile::constant(), 2.0, 4);
  REQUIRE(c.eps_list.size() == 4);
  CHECK(c.eps_list[0] == Approx(0.1));
  CHECK(c.eps_list[3] == Approx(0.0125));
  CHECK(c.q == 5.0);
  CHECK(c.delta(0.05) == Approx(std::pow(0.05, 5)));

  const auto sp = make_default(NozzleProfile::spherical(3), 2.0, 4);
  CHECK(sp.domain == DomainRule::Spherical);
  CHECK(sp.a(0.05) == Approx(0.05));
  CHECK(sp.b(0.05) == Approx(20.0));
  CHECK(sp.rho_bar(0.05, 2.0) == Approx(std::pow(0.05, 1.5)));
  CHECK(sp.eps_list == c.eps_list);

  const auto e = make_default(NozzleProfile::exponential(0.5), 1.4, 3);
  CHECK(e.domain == DomainRule::Logarithmic);
  CHECK(e.b(0.1) == Approx(2.0 + std::log(10.0)));
}

TEST_CASE("every builtin profile certifies with M_budget = 10") {
  const NozzleProfile profiles[] = {NozzleProfile::constant(),        NozzleProfile::gaussian_bump(1, 1),
                                    NozzleProfile::power_law_closing(0.5), NozzleProfile::exponential(0.3),
                                    NozzleProfile::spherical(2),       NozzleProfile::spherical(3),
                                    NozzleProfile::spherical(4)};
  for (double gamma : {1.4, 2.0, 3.0, 5.0}) {
    for (const auto& p : profiles) {
      const auto s = make_default(p, gamma, 4);
      const auto rep = certify(s, p, GasLaw(gamma));
      INFO(p.describe() << " gamma=" << gamma << "\n" << rep.text());
      CHECK(rep.passed());
    }
  }
}

TEST_CASE("spherical schedules use the spherical relation") {
  const auto p = NozzleProfile::spherical(3);
  const auto rep = certify(make_default(p, 2.0, 4), p, GasLaw(2.0));
  CHECK(rep.entry("spherical").applicable);
  CHECK_FALSE(rep.entry("curvature_window").applicable);
  // rho_bar^gamma b^n = 1 exactly; the delta part is eps^(q-1-n) <= 1
  CHECK(rep.entry("spherical").max <= 2.0 + 1e-12);
  const auto np = certify(make_default(NozzleProfile::constant(), 2.0, 4), NozzleProfile::constant(), GasLaw(2.0));
  CHECK_FALSE(np.entry("spherical").applicable);
  CHECK(np.entry("curvature_window").max == Approx(2.0));
}

TEST_CASE("failures are reported") {
  ViscositySchedule s;
  s.eps_list = {0.1, 0.05};
  s.q = 2.0;  // delta too large for the |a|^beta bullet
  const auto rep = certify(s, NozzleProfile::constant(), GasLaw(2.0));
  CHECK_FALSE(rep.passed());
  CHECK_FALSE(rep.entry("delta/eps|A||a|^beta|A^((g-3)/(g-1))|").pass);
  CHECK(rep.text().find("FAIL") != std::string::npos);
  CHECK_THROWS_AS(make_default(NozzleProfile::tabulated({0, 1, 2}, {1, 1, 1}), 2.0, 4), ConfigError);
}
