#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/config.hpp"

using namespace collspin;

namespace {

const char* kSpinConfig = R"(# superradiant laser working point
[basis]
n = 10

[hamiltonian]
hz = -1.0
jx2 = 0.5
jx2_over_n = true

[collective]
jminus = 0.25

[local_rates]
pp = 2.0
mm = 1.0
zz = (0.5, 0)
pm = (0.1, -0.05)
mp = (0.1, 0.05)
)";

}  // namespace

TEST_CASE("model config parses into the liouville specs") {
  auto c = parse_model_config(kSpinConfig);
  CHECK(c.n_spins == 10);
  CHECK(c.hamiltonian.hz == -1.0);
  CHECK(c.hamiltonian.jx2.coeff == 0.5);
  CHECK(c.hamiltonian.jx2.over_n);
  CHECK_FALSE(c.hamiltonian.jy2.over_n);
  REQUIRE(c.collective.size() == 1);
  CHECK(c.collective[0].kind == CollectiveKind::Jminus);
  CHECK(c.collective[0].rate == 0.25);
  CHECK(c.local_rates.gamma(0, 0) == Complex(2.0, 0.0));
  CHECK(c.local_rates.gamma(1, 1) == Complex(1.0, 0.0));
  CHECK(c.local_rates.gamma(2, 2) == Complex(0.5, 0.0));
  CHECK(c.local_rates.gamma(0, 1) == Complex(0.1, -0.05));
  CHECK(c.local_rates.gamma(1, 0) == Complex(0.1, 0.05));
  CHECK(c.local_rates.hermiticity_error() < 1e-15);
  CHECK_FALSE(c.boson.has_value());
}

TEST_CASE("unknown keys and sections are rejected by name") {
  CHECK_THROWS_WITH_AS(parse_model_config("[basis]\nn = 4\nm = 2\n"
                                          "[local_rates]\nmm = 1\n"),
                       "unknown key 'm' in section [basis]", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_model_config("[basis]\nn = 4\n[junk]\nx = 1\n"),
      "unknown section [junk]", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_model_config("[basis]\nn = 4\n[local_rates]\nqq = 1\n"),
      "unknown key 'qq' in section [local_rates]", ConfigError);
  CHECK_THROWS_AS(parse_model_config("[local_rates]\nmm = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_model_config("[basis]\nn = 4\nn = 5\n"
                                     "[local_rates]\nmm = 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_model_config("[basis]\nn = 4\n"
                                     "[local_rates]\nmm = banana\n"),
                  ConfigError);
}

TEST_CASE("boson section round rules") {
  const std::string base = "[basis]\nn = 80\n[local_rates]\nmm = 1\n";
  auto c = parse_model_config(base +
                              "[boson]\nn_max = 20\nell_max = 4\n"
                              "order = lo\nmodel = laser\n");
  REQUIRE(c.boson.has_value());
  CHECK(c.boson->n_max == 20);
  CHECK(c.boson->ell_max == 4);
  CHECK(c.boson->order == ExpansionOrder::LO);
  CHECK(c.boson->model == "laser");

  // m_max is an accepted alias, but not alongside ell_max
  auto alias = parse_model_config(base +
                                  "[boson]\nn_max = 20\nm_max = 4\n"
                                  "model = tfim\n");
  CHECK(alias.boson->ell_max == 4);
  CHECK(alias.boson->order == ExpansionOrder::NLO);
  CHECK_THROWS_AS(
      parse_model_config(base +
                         "[boson]\nn_max = 20\nell_max = 4\nm_max = 4\n"
                         "model = tfim\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_model_config(base + "[boson]\nn_max = 20\n"
                                            "ell_max = 4\nmodel = dicke\n"),
                  ConfigError);
}

TEST_CASE("model config round-trips through the emitter") {
  auto c = parse_model_config(kSpinConfig);
  const std::string emitted = emit_model_config(c);
  auto again = parse_model_config(emitted);
  CHECK(emit_model_config(again) == emitted);

  c.boson = BosonConfig{33, 7, ExpansionOrder::NLO, "tfim"};
  const std::string with_boson = emit_model_config(c);
  CHECK(emit_model_config(parse_model_config(with_boson)) == with_boson);
}

TEST_CASE("experiment config for each kind") {
  auto fig = parse_experiment_config(
      "[experiment]\nkind = figure\nfigure = fig5b\nout_dir = out\nseed = 7\n");
  CHECK(fig.kind == ExperimentKind::Figure);
  CHECK(fig.figure == "fig5b");
  CHECK(fig.out_dir == "out");
  CHECK(fig.seed == 7);
  CHECK_FALSE(fig.model.has_value());

  CHECK_THROWS_AS(
      parse_experiment_config("[experiment]\nkind = figure\nfigure = fig9\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("[experiment]\nkind = figure\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("[experiment]\nkind = juggling\n"),
                  ConfigError);

  auto spin = parse_experiment_config(
      std::string("[experiment]\nkind = spin_evolve\n") + kSpinConfig +
      "[evolve]\nt_max = 5\nn_times = 21\nobservable = jpjm\n");
  REQUIRE(spin.model.has_value());
  REQUIRE(spin.evolve.has_value());
  CHECK(spin.evolve->t_max == 5.0);
  CHECK(spin.evolve->observable == "jpjm");

  // spin experiments need the model sections
  CHECK_THROWS_AS(parse_experiment_config("[experiment]\nkind = spin_steady\n"),
                  ConfigError);
  // boson experiments additionally need [boson]
  CHECK_THROWS_AS(parse_experiment_config(
                      std::string("[experiment]\nkind = boson_steady\n") +
                      kSpinConfig),
                  ConfigError);

  auto pde = parse_experiment_config(
      "[experiment]\nkind = classical_pde\n"
      "[classical]\nmodel = tfim\neta = -0.25\nkappa = 1\n"
      "t_max = 30\nn_times = 4\n");
  REQUIRE(pde.classical.has_value());
  CHECK(pde.classical->model == "tfim");
  CHECK(pde.classical->eta == -0.25);
  CHECK_THROWS_AS(
      parse_experiment_config("[experiment]\nkind = classical_pde\n"),
      ConfigError);

  auto th = parse_experiment_config(
      "[experiment]\nkind = thermal_sweep\n"
      "[thermal]\nomega = 1\nomega0 = 1\nlambda = 1\n"
      "beta_min = 0.2\nbeta_max = 2\nn_beta = 9\n");
  REQUIRE(th.thermal.has_value());
  CHECK(th.thermal->n_beta == 9);
}

TEST_CASE("experiment config round-trips") {
  auto full = parse_experiment_config(
      std::string("[experiment]\nkind = spin_correlate\nseed = 3\n") +
      kSpinConfig + "[evolve]\nt_max = 12.5\nn_times = 41\n");
  const std::string emitted = emit_experiment_config(full);
  CHECK(emit_experiment_config(parse_experiment_config(emitted)) == emitted);

  auto pde = parse_experiment_config(
      "[experiment]\nkind = classical_pde\nout_dir = artifacts\n"
      "[classical]\nmodel = laser\nzeta = -1\nhalf_width = 3\ncells = 201\n");
  const std::string pde_emitted = emit_experiment_config(pde);
  CHECK(emit_experiment_config(parse_experiment_config(pde_emitted)) ==
        pde_emitted);
}
