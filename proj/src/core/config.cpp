#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace collspin {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  std::vector<Entry> entries;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<Section> split_sections(const std::string& text) {
  std::vector<Section> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto cut = raw.find_first_of("#;");
    if (cut != std::string::npos) raw.erase(cut);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("line " + std::to_string(line) +
                          ": malformed section header '" + s + "'");
      out.push_back({trim(s.substr(1, s.size() - 2)), {}});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) +
                        ": expected 'key = value', got '" + s + "'");
    if (out.empty())
      throw ConfigError("line " + std::to_string(line) +
                        ": key outside any [section]");
    Entry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.key.empty() || e.value.empty())
      throw ConfigError("line " + std::to_string(line) +
                        ": empty key or value in '" + s + "'");
    for (const auto& prev : out.back().entries)
      if (prev.key == e.key)
        throw ConfigError("duplicate key '" + e.key + "' in [" +
                          out.back().name + "]");
    out.back().entries.push_back(std::move(e));
  }
  return out;
}

// Cursor over one section that records which keys were consumed, so the
// unknown-key check can name the leftovers.
class SectionView {
 public:
  SectionView() = default;
  explicit SectionView(const Section* s) : section_(s) {
    if (s) used_.assign(s->entries.size(), false);
  }

  bool present() const { return section_ != nullptr; }

  const std::string* find(const std::string& key) {
    if (!section_) return nullptr;
    for (size_t i = 0; i < section_->entries.size(); ++i) {
      if (section_->entries[i].key == key) {
        used_[i] = true;
        return &section_->entries[i].value;
      }
    }
    return nullptr;
  }

  void finish() const {
    if (!section_) return;
    for (size_t i = 0; i < used_.size(); ++i)
      if (!used_[i])
        throw ConfigError("unknown key '" + section_->entries[i].key +
                          "' in section [" + section_->name + "]");
  }

 private:
  const Section* section_ = nullptr;
  std::vector<bool> used_;
};

double parse_double(const std::string& v, const std::string& key) {
  double out = 0.0;
  const char* b = v.data();
  const char* e = b + v.size();
  auto [p, ec] = std::from_chars(b, e, out);
  if (ec != std::errc() || p != e)
    throw ConfigError("key '" + key + "': cannot parse number '" + v + "'");
  return out;
}

long parse_int(const std::string& v, const std::string& key) {
  long out = 0;
  const char* b = v.data();
  const char* e = b + v.size();
  auto [p, ec] = std::from_chars(b, e, out);
  if (ec != std::errc() || p != e)
    throw ConfigError("key '" + key + "': cannot parse integer '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + v +
                    "'");
}

// Accepts a bare real or the canonical pair "(re, im)".
Complex parse_complex(const std::string& v, const std::string& key) {
  if (v.front() != '(') return Complex(parse_double(v, key), 0.0);
  if (v.back() != ')')
    throw ConfigError("key '" + key + "': unterminated complex '" + v + "'");
  const std::string inner = v.substr(1, v.size() - 2);
  const auto comma = inner.find(',');
  if (comma == std::string::npos)
    throw ConfigError("key '" + key + "': expected '(re, im)', got '" + v +
                      "'");
  return Complex(parse_double(trim(inner.substr(0, comma)), key),
                 parse_double(trim(inner.substr(comma + 1)), key));
}

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

std::string fmt(Complex v) {
  return "(" + fmt(v.real()) + ", " + fmt(v.imag()) + ")";
}

const Section* find_section(const std::vector<Section>& sections,
                            const std::string& name) {
  const Section* found = nullptr;
  for (const auto& s : sections) {
    if (s.name != name) continue;
    if (found) throw ConfigError("duplicate section [" + name + "]");
    found = &s;
  }
  return found;
}

void read_quadratic(SectionView& sec, const std::string& base,
                    HamiltonianSpec::Quadratic& q) {
  if (const auto* v = sec.find(base)) q.coeff = parse_double(*v, base);
  if (const auto* v = sec.find(base + "_over_n"))
    q.over_n = parse_bool(*v, base + "_over_n");
}

ModelConfig read_model(const std::vector<Section>& sections) {
  ModelConfig out;

  const Section* basis = find_section(sections, "basis");
  if (!basis) throw ConfigError("missing required section [basis]");
  {
    SectionView sec(basis);
    const auto* n = sec.find("n");
    if (!n) throw ConfigError("section [basis]: missing key 'n'");
    out.n_spins = static_cast<int>(parse_int(*n, "n"));
    if (out.n_spins < 1)
      throw ConfigError("key 'n': need a positive spin count");
    sec.finish();
  }

  {
    SectionView sec(find_section(sections, "hamiltonian"));
    if (const auto* v = sec.find("hx")) out.hamiltonian.hx = parse_double(*v, "hx");
    if (const auto* v = sec.find("hy")) out.hamiltonian.hy = parse_double(*v, "hy");
    if (const auto* v = sec.find("hz")) out.hamiltonian.hz = parse_double(*v, "hz");
    read_quadratic(sec, "jx2", out.hamiltonian.jx2);
    read_quadratic(sec, "jy2", out.hamiltonian.jy2);
    read_quadratic(sec, "jz2", out.hamiltonian.jz2);
    read_quadratic(sec, "jpjm", out.hamiltonian.jpjm);
    sec.finish();
  }

  {
    SectionView sec(find_section(sections, "collective"));
    const std::pair<const char*, CollectiveKind> kinds[] = {
        {"jminus", CollectiveKind::Jminus},
        {"jplus", CollectiveKind::Jplus},
        {"jz", CollectiveKind::Jz},
    };
    for (const auto& [key, kind] : kinds) {
      if (const auto* v = sec.find(key)) {
        const double rate = parse_double(*v, key);
        if (rate < 0.0)
          throw ConfigError(std::string("key '") + key +
                            "': collective rate must be nonnegative");
        if (rate > 0.0) out.collective.push_back({rate, kind});
      }
    }
    sec.finish();
  }

  const Section* local = find_section(sections, "local_rates");
  if (!local) throw ConfigError("missing required section [local_rates]");
  {
    SectionView sec(local);
    const char* names[3] = {"p", "m", "z"};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const std::string key = std::string(names[a]) + names[b];
        if (const auto* v = sec.find(key))
          out.local_rates.gamma(a, b) = parse_complex(*v, key);
      }
    }
    sec.finish();
  }

  if (const Section* boson = find_section(sections, "boson")) {
    SectionView sec(boson);
    BosonConfig bc;
    const auto* n_max = sec.find("n_max");
    if (!n_max) throw ConfigError("section [boson]: missing key 'n_max'");
    bc.n_max = static_cast<int>(parse_int(*n_max, "n_max"));
    const auto* ell = sec.find("ell_max");
    const auto* m = sec.find("m_max");
    if (ell && m)
      throw ConfigError("section [boson]: give ell_max or m_max, not both");
    if (!ell && !m)
      throw ConfigError("section [boson]: missing key 'ell_max' (or m_max)");
    bc.ell_max = static_cast<int>(parse_int(ell ? *ell : *m, "ell_max"));
    if (bc.n_max < 0 || bc.ell_max < 0)
      throw ConfigError("section [boson]: cutoffs must be nonnegative");
    if (const auto* v = sec.find("order")) {
      if (*v == "lo")
        bc.order = ExpansionOrder::LO;
      else if (*v == "nlo")
        bc.order = ExpansionOrder::NLO;
      else
        throw ConfigError("key 'order': expected lo or nlo, got '" + *v + "'");
    }
    const auto* model = sec.find("model");
    if (!model) throw ConfigError("section [boson]: missing key 'model'");
    if (*model != "laser" && *model != "tfim")
      throw ConfigError("key 'model': expected laser or tfim, got '" + *model +
                        "'");
    bc.model = *model;
    sec.finish();
    out.boson = bc;
  }

  return out;
}

void emit_model(std::ostringstream& out, const ModelConfig& c) {
  out << "[basis]\n"
      << "n = " << c.n_spins << "\n";

  out << "\n[hamiltonian]\n"
      << "hx = " << fmt(c.hamiltonian.hx) << "\n"
      << "hy = " << fmt(c.hamiltonian.hy) << "\n"
      << "hz = " << fmt(c.hamiltonian.hz) << "\n";
  const std::pair<const char*, const HamiltonianSpec::Quadratic*> quads[] = {
      {"jx2", &c.hamiltonian.jx2},
      {"jy2", &c.hamiltonian.jy2},
      {"jz2", &c.hamiltonian.jz2},
      {"jpjm", &c.hamiltonian.jpjm},
  };
  for (const auto& [name, q] : quads) {
    out << name << " = " << fmt(q->coeff) << "\n"
        << name << "_over_n = " << (q->over_n ? "true" : "false") << "\n";
  }

  out << "\n[collective]\n";
  const std::pair<const char*, CollectiveKind> jump_keys[] = {
      {"jminus", CollectiveKind::Jminus},
      {"jplus", CollectiveKind::Jplus},
      {"jz", CollectiveKind::Jz},
  };
  for (const auto& [key, kind] : jump_keys) {
    double rate = 0.0;
    for (const auto& jump : c.collective)
      if (jump.kind == kind) rate += jump.rate;
    out << key << " = " << fmt(rate) << "\n";
  }

  out << "\n[local_rates]\n";
  const char* names[3] = {"p", "m", "z"};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      out << names[a] << names[b] << " = " << fmt(c.local_rates.gamma(a, b))
          << "\n";

  if (c.boson) {
    out << "\n[boson]\n"
        << "n_max = " << c.boson->n_max << "\n"
        << "ell_max = " << c.boson->ell_max << "\n"
        << "order = " << (c.boson->order == ExpansionOrder::LO ? "lo" : "nlo")
        << "\n"
        << "model = " << c.boson->model << "\n";
  }
}

const std::map<std::string, ExperimentKind>& kind_table() {
  static const std::map<std::string, ExperimentKind> table = {
      {"spin_steady", ExperimentKind::SpinSteady},
      {"spin_evolve", ExperimentKind::SpinEvolve},
      {"spin_correlate", ExperimentKind::SpinCorrelate},
      {"boson_steady", ExperimentKind::BosonSteady},
      {"boson_correlate", ExperimentKind::BosonCorrelate},
      {"classical_pde", ExperimentKind::ClassicalPde},
      {"thermal_sweep", ExperimentKind::ThermalSweep},
      {"figure", ExperimentKind::Figure},
  };
  return table;
}

bool known_figure(const std::string& id) {
  static const char* ids[] = {"fig5a", "fig5b", "fig5c", "fig5d",
                              "fig6a", "fig6b", "fig6c", "fig6d",
                              "fig7a", "fig7b", "fig8",
                              "eq_steady_moments", "eq_laser_correlator"};
  for (const char* k : ids)
    if (id == k) return true;
  return false;
}

bool needs_model(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::SpinSteady:
    case ExperimentKind::SpinEvolve:
    case ExperimentKind::SpinCorrelate:
    case ExperimentKind::BosonSteady:
    case ExperimentKind::BosonCorrelate:
      return true;
    default:
      return false;
  }
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  for (const auto& [name, k] : kind_table())
    if (k == kind) return name.c_str();
  return "?";
}

ModelConfig parse_model_config(const std::string& text) {
  const auto sections = split_sections(text);
  static const char* allowed[] = {"basis", "hamiltonian", "collective",
                                  "local_rates", "boson"};
  for (const auto& s : sections) {
    bool ok = false;
    for (const char* name : allowed) ok = ok || s.name == name;
    if (!ok) throw ConfigError("unknown section [" + s.name + "]");
  }
  return read_model(sections);
}

std::string emit_model_config(const ModelConfig& config) {
  std::ostringstream out;
  emit_model(out, config);
  return out.str();
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  const auto sections = split_sections(text);
  static const char* allowed[] = {"experiment", "basis",     "hamiltonian",
                                  "collective", "local_rates", "boson",
                                  "evolve",     "classical", "thermal"};
  for (const auto& s : sections) {
    bool ok = false;
    for (const char* name : allowed) ok = ok || s.name == name;
    if (!ok) throw ConfigError("unknown section [" + s.name + "]");
  }

  ExperimentConfig out;
  const Section* exp = find_section(sections, "experiment");
  if (!exp) throw ConfigError("missing required section [experiment]");
  {
    SectionView sec(exp);
    const auto* kind = sec.find("kind");
    if (!kind) throw ConfigError("section [experiment]: missing key 'kind'");
    const auto it = kind_table().find(*kind);
    if (it == kind_table().end())
      throw ConfigError("key 'kind': unknown experiment kind '" + *kind + "'");
    out.kind = it->second;
    if (const auto* v = sec.find("figure")) {
      if (out.kind != ExperimentKind::Figure)
        throw ConfigError("key 'figure' only applies to kind = figure");
      if (!known_figure(*v))
        throw ConfigError("key 'figure': unknown figure id '" + *v + "'");
      out.figure = *v;
    } else if (out.kind == ExperimentKind::Figure) {
      throw ConfigError("kind = figure requires key 'figure'");
    }
    if (const auto* v = sec.find("out_dir")) out.out_dir = *v;
    if (const auto* v = sec.find("seed"))
      out.seed = static_cast<unsigned long>(parse_int(*v, "seed"));
    sec.finish();
  }

  if (find_section(sections, "basis") || needs_model(out.kind))
    out.model = read_model(sections);
  if ((out.kind == ExperimentKind::BosonSteady ||
       out.kind == ExperimentKind::BosonCorrelate) &&
      !out.model->boson)
    throw ConfigError("boson experiments require a [boson] section");

  if (const Section* s = find_section(sections, "evolve")) {
    SectionView sec(s);
    EvolveConfig ec;
    if (const auto* v = sec.find("t_max")) ec.t_max = parse_double(*v, "t_max");
    if (const auto* v = sec.find("n_times"))
      ec.n_times = static_cast<int>(parse_int(*v, "n_times"));
    if (const auto* v = sec.find("observable")) {
      if (*v != "jz" && *v != "jz2" && *v != "jpjm" && *v != "jx2")
        throw ConfigError("key 'observable': unknown observable '" + *v + "'");
      ec.observable = *v;
    }
    if (ec.t_max <= 0.0 || ec.n_times < 2)
      throw ConfigError("section [evolve]: need t_max > 0 and n_times >= 2");
    out.evolve = ec;
  }

  if (const Section* s = find_section(sections, "classical")) {
    SectionView sec(s);
    ClassicalConfig cc;
    const auto* model = sec.find("model");
    if (!model) throw ConfigError("section [classical]: missing key 'model'");
    if (*model != "laser" && *model != "tfim" && *model != "appendix_d")
      throw ConfigError("key 'model': expected laser, tfim or appendix_d");
    cc.model = *model;
    if (const auto* v = sec.find("zeta")) cc.zeta = parse_double(*v, "zeta");
    if (const auto* v = sec.find("eta")) cc.eta = parse_double(*v, "eta");
    if (const auto* v = sec.find("kappa")) cc.kappa = parse_double(*v, "kappa");
    if (const auto* v = sec.find("delta_star"))
      cc.delta_star = parse_double(*v, "delta_star");
    if (const auto* v = sec.find("gamma")) cc.gamma = parse_double(*v, "gamma");
    if (const auto* v = sec.find("g")) cc.g = parse_double(*v, "g");
    if (const auto* v = sec.find("half_width"))
      cc.half_width = parse_double(*v, "half_width");
    if (const auto* v = sec.find("cells"))
      cc.cells = static_cast<int>(parse_int(*v, "cells"));
    if (const auto* v = sec.find("t_max")) cc.t_max = parse_double(*v, "t_max");
    if (const auto* v = sec.find("n_times"))
      cc.n_times = static_cast<int>(parse_int(*v, "n_times"));
    if (cc.t_max <= 0.0 || cc.n_times < 2)
      throw ConfigError("section [classical]: need t_max > 0 and n_times >= 2");
    sec.finish();
    out.classical = cc;
  } else if (out.kind == ExperimentKind::ClassicalPde) {
    throw ConfigError("kind = classical_pde requires a [classical] section");
  }

  if (const Section* s = find_section(sections, "thermal")) {
    SectionView sec(s);
    ThermalConfig tc;
    if (const auto* v = sec.find("n_spins"))
      tc.n_spins = static_cast<int>(parse_int(*v, "n_spins"));
    if (tc.n_spins < 1)
      throw ConfigError("section [thermal]: n_spins must be positive");
    if (const auto* v = sec.find("omega")) tc.omega = parse_double(*v, "omega");
    if (const auto* v = sec.find("omega0"))
      tc.omega0 = parse_double(*v, "omega0");
    if (const auto* v = sec.find("lambda"))
      tc.lambda = parse_double(*v, "lambda");
    if (const auto* v = sec.find("beta_min"))
      tc.beta_min = parse_double(*v, "beta_min");
    if (const auto* v = sec.find("beta_max"))
      tc.beta_max = parse_double(*v, "beta_max");
    if (const auto* v = sec.find("n_beta"))
      tc.n_beta = static_cast<int>(parse_int(*v, "n_beta"));
    if (tc.omega <= 0.0 || tc.omega0 <= 0.0 || tc.lambda < 0.0)
      throw ConfigError("section [thermal]: need omega, omega0 > 0");
    if (!(tc.beta_min > 0.0) || tc.beta_max < tc.beta_min || tc.n_beta < 1)
      throw ConfigError("section [thermal]: bad beta range");
    sec.finish();
    out.thermal = tc;
  } else if (out.kind == ExperimentKind::ThermalSweep) {
    throw ConfigError("kind = thermal_sweep requires a [thermal] section");
  }

  return out;
}

std::string emit_experiment_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "[experiment]\n"
      << "kind = " << to_string(c.kind) << "\n";
  if (c.kind == ExperimentKind::Figure) out << "figure = " << c.figure << "\n";
  out << "out_dir = " << c.out_dir << "\n"
      << "seed = " << c.seed << "\n";
  if (c.model) {
    out << "\n";
    emit_model(out, *c.model);
  }
  if (c.evolve) {
    out << "\n[evolve]\n"
        << "t_max = " << fmt(c.evolve->t_max) << "\n"
        << "n_times = " << c.evolve->n_times << "\n"
        << "observable = " << c.evolve->observable << "\n";
  }
  if (c.classical) {
    const auto& cc = *c.classical;
    out << "\n[classical]\n"
        << "model = " << cc.model << "\n"
        << "zeta = " << fmt(cc.zeta) << "\n"
        << "eta = " << fmt(cc.eta) << "\n"
        << "kappa = " << fmt(cc.kappa) << "\n"
        << "delta_star = " << fmt(cc.delta_star) << "\n"
        << "gamma = " << fmt(cc.gamma) << "\n"
        << "g = " << fmt(cc.g) << "\n"
        << "half_width = " << fmt(cc.half_width) << "\n"
        << "cells = " << cc.cells << "\n"
        << "t_max = " << fmt(cc.t_max) << "\n"
        << "n_times = " << cc.n_times << "\n";
  }
  if (c.thermal) {
    const auto& tc = *c.thermal;
    out << "\n[thermal]\n"
        << "n_spins = " << tc.n_spins << "\n"
        << "omega = " << fmt(tc.omega) << "\n"
        << "omega0 = " << fmt(tc.omega0) << "\n"
        << "lambda = " << fmt(tc.lambda) << "\n"
        << "beta_min = " << fmt(tc.beta_min) << "\n"
        << "beta_max = " << fmt(tc.beta_max) << "\n"
        << "n_beta = " << tc.n_beta << "\n";
  }
  return out.str();
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

}  // namespace collspin
