#include "config.hpp"

#include "posikit/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace posikit::cli {

namespace pt = boost::property_tree;

namespace {

using Setter = std::function<void(RunConfig&, const std::string&)>;

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, fmt::format("expected a number, got '{}'", text));
  }
  return v;
}

long to_long(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, fmt::format("expected an integer, got '{}'", text));
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  return static_cast<int>(to_long(key, text));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

Variant to_variant(const std::string& key, const std::string& text) {
  try {
    return parse_variant(trim(text));
  } catch (const InvalidArgument&) {
    throw ConfigError(key, fmt::format("unknown variant '{}' (multiplier|cutoff|mass|none)", text));
  }
}

ModelId to_model(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "allen_cahn") return ModelId::allen_cahn;
  if (t == "pme") return ModelId::pme;
  if (t == "lubrication") return ModelId::lubrication;
  if (t == "pnp") return ModelId::pnp;
  throw ConfigError(key, fmt::format("unknown model '{}' (allen_cahn|pme|lubrication|pnp)", text));
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"run.model", [](RunConfig& c, const std::string& v) { c.model = to_model("run.model", v); }},
      {"run.order", [](RunConfig& c, const std::string& v) { c.order = to_int("run.order", v); }},
      {"run.dt", [](RunConfig& c, const std::string& v) { c.dt = to_double("run.dt", v); }},
      {"run.horizon",
       [](RunConfig& c, const std::string& v) { c.horizon = to_double("run.horizon", v); }},
      {"run.variant",
       [](RunConfig& c, const std::string& v) { c.variant = to_variant("run.variant", v); }},
      {"run.lower_bound",
       [](RunConfig& c, const std::string& v) { c.lower_bound = to_double("run.lower_bound", v); }},
      {"run.snapshot_every",
       [](RunConfig& c, const std::string& v) {
         c.snapshot_every = to_long("run.snapshot_every", v);
       }},
      {"run.out", [](RunConfig& c, const std::string& v) { c.out = trim(v); }},
      {"run.solver_tolerance",
       [](RunConfig& c, const std::string& v) {
         c.solver.tolerance = to_double("run.solver_tolerance", v);
       }},
      {"run.solver_max_iterations",
       [](RunConfig& c, const std::string& v) {
         c.solver.max_iterations = to_int("run.solver_max_iterations", v);
       }},
      {"run.gmres_restart",
       [](RunConfig& c, const std::string& v) {
         c.solver.restart = to_int("run.gmres_restart", v);
       }},
      {"run.secant_tolerance",
       [](RunConfig& c, const std::string& v) {
         c.secant.tolerance = to_double("run.secant_tolerance", v);
       }},
      {"run.secant_max_iterations",
       [](RunConfig& c, const std::string& v) {
         c.secant.max_iterations = to_int("run.secant_max_iterations", v);
       }},

      {"allen_cahn.eps2",
       [](RunConfig& c, const std::string& v) {
         c.allen_cahn.eps2 = to_double("allen_cahn.eps2", v);
       }},
      {"allen_cahn.n",
       [](RunConfig& c, const std::string& v) { c.allen_cahn.n = to_int("allen_cahn.n", v); }},
      {"allen_cahn.dim",
       [](RunConfig& c, const std::string& v) { c.allen_cahn.dim = to_int("allen_cahn.dim", v); }},

      {"pme.m", [](RunConfig& c, const std::string& v) { c.pme.m = to_double("pme.m", v); }},
      {"pme.C", [](RunConfig& c, const std::string& v) { c.pme.C = to_double("pme.C", v); }},
      {"pme.dim", [](RunConfig& c, const std::string& v) { c.pme.dim = to_int("pme.dim", v); }},
      {"pme.n", [](RunConfig& c, const std::string& v) { c.pme.n = to_int("pme.n", v); }},
      {"pme.half_width",
       [](RunConfig& c, const std::string& v) {
         c.pme.half_width = to_double("pme.half_width", v);
       }},

      {"lubrication.rho",
       [](RunConfig& c, const std::string& v) {
         c.lubrication.rho = to_double("lubrication.rho", v);
       }},
      {"lubrication.mode",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "floor_eps") {
           c.lubrication.mode = LubricationModel::Regularization::floor_eps;
         } else if (t == "reg_eta") {
           c.lubrication.mode = LubricationModel::Regularization::reg_eta;
         } else {
           throw ConfigError("lubrication.mode",
                             fmt::format("unknown mode '{}' (floor_eps|reg_eta)", v));
         }
       }},
      {"lubrication.reg_eta",
       [](RunConfig& c, const std::string& v) {
         c.lubrication.reg_eta = to_double("lubrication.reg_eta", v);
       }},
      {"lubrication.floor_eps",
       [](RunConfig& c, const std::string& v) {
         c.lubrication.floor_eps = to_double("lubrication.floor_eps", v);
       }},
      {"lubrication.dim",
       [](RunConfig& c, const std::string& v) {
         c.lubrication.dim = to_int("lubrication.dim", v);
       }},
      {"lubrication.n",
       [](RunConfig& c, const std::string& v) { c.lubrication.n = to_int("lubrication.n", v); }},

      {"pnp.debye",
       [](RunConfig& c, const std::string& v) { c.pnp.debye = to_double("pnp.debye", v); }},
      {"pnp.n", [](RunConfig& c, const std::string& v) { c.pnp.n = to_int("pnp.n", v); }},
      {"pnp.dim", [](RunConfig& c, const std::string& v) { c.pnp.dim = to_int("pnp.dim", v); }},
      {"pnp.potential_init",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "poisson") {
           c.pnp.potential_init = PnpModel::PotentialInit::poisson;
         } else if (t == "disc") {
           c.pnp.potential_init = PnpModel::PotentialInit::disc;
         } else {
           throw ConfigError("pnp.potential_init",
                             fmt::format("unknown potential init '{}' (poisson|disc)", v));
         }
       }},

      {"convergence.dts",
       [](RunConfig& c, const std::string& v) {
         c.dts.clear();
         for (const auto& item : split_list(v)) c.dts.push_back(to_double("convergence.dts", item));
       }},
      {"convergence.orders",
       [](RunConfig& c, const std::string& v) {
         c.orders.clear();
         for (const auto& item : split_list(v)) {
           c.orders.push_back(to_int("convergence.orders", item));
         }
       }},
      {"convergence.reference_dt",
       [](RunConfig& c, const std::string& v) {
         c.reference.dt = to_double("convergence.reference_dt", v);
       }},
      {"convergence.reference_order",
       [](RunConfig& c, const std::string& v) {
         c.reference.order = to_int("convergence.reference_order", v);
       }},
      {"convergence.reference_variant",
       [](RunConfig& c, const std::string& v) {
         c.reference.variant = to_variant("convergence.reference_variant", v);
       }},

      {"compare.variants",
       [](RunConfig& c, const std::string& v) {
         c.variants.clear();
         for (const auto& item : split_list(v)) {
           c.variants.push_back(to_variant("compare.variants", item));
         }
       }},
  };
  return table;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value, bool& variant_set,
           bool& lower_bound_set) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(key, "unknown key");
  it->second(cfg, value);
  if (key == "run.variant") variant_set = true;
  if (key == "run.lower_bound") lower_bound_set = true;
}

void validate(RunConfig& cfg, bool variant_set, bool lower_bound_set) {
  if (cfg.order < 1 || cfg.order > 4) throw ConfigError("run.order", "must be in 1..4");
  if (!(cfg.dt > 0.0)) throw ConfigError("run.dt", "must be positive");
  if (!(cfg.horizon >= cfg.dt * (1.0 - 1e-12))) {
    throw ConfigError("run.horizon", "must be at least one time step");
  }
  try {
    (void)steps_to_reach(cfg.horizon, cfg.dt);
  } catch (const InvalidArgument& e) {
    throw ConfigError("run.horizon", e.what());
  }
  if (cfg.snapshot_every < 0) throw ConfigError("run.snapshot_every", "must be nonnegative");

  if (!variant_set) {
    cfg.variant = cfg.model == ModelId::lubrication || cfg.model == ModelId::pnp ? Variant::mass
                                                                                 : Variant::multiplier;
  }
  if (cfg.model == ModelId::pnp && cfg.variant != Variant::mass) {
    throw ConfigError("run.variant", "the PNP model supports only the mass variant");
  }
  if (cfg.model == ModelId::lubrication) {
    if (lower_bound_set) {
      throw ConfigError("run.lower_bound", "set the lubrication bound with lubrication.floor_eps");
    }
    cfg.lower_bound = cfg.lubrication.mode == LubricationModel::Regularization::floor_eps
                          ? cfg.lubrication.floor_eps
                          : 0.0;
  }
  if (cfg.orders.empty()) cfg.orders.push_back(cfg.order);
  for (int k : cfg.orders) {
    if (k < 1 || k > 4) throw ConfigError("convergence.orders", "orders must be in 1..4");
  }
  for (std::size_t i = 1; i < cfg.dts.size(); ++i) {
    if (!(cfg.dts[i] < cfg.dts[i - 1])) {
      throw ConfigError("convergence.dts", "time steps must be strictly decreasing");
    }
  }
  for (double dt : cfg.dts) {
    if (!(dt > 0.0)) throw ConfigError("convergence.dts", "time steps must be positive");
  }
  if (!(cfg.reference.dt > 0.0)) throw ConfigError("convergence.reference_dt", "must be positive");
  if (cfg.variants.empty()) throw ConfigError("compare.variants", "needs at least one variant");
}

RunConfig from_tree(const pt::ptree& tree) {
  RunConfig cfg;
  bool variant_set = false;
  bool lower_bound_set = false;
  // Pass 1 reads the model so later keys can be validated against it.
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      if (name == "model") apply(cfg, "run.model", node.data(), variant_set, lower_bound_set);
    } else if (name == "run") {
      if (const auto m = node.get_optional<std::string>("model")) {
        apply(cfg, "run.model", *m, variant_set, lower_bound_set);
      }
    }
  }
  static const std::set<std::string> sections = {"run", "allen_cahn", "pme", "lubrication",
                                                 "pnp", "convergence", "compare"};
  for (const auto& [name, node] : tree) {
    if (node.empty() && node.data().empty() && sections.count(name)) continue;
    if (node.empty()) {
      // Top-level keys belong to [run].
      apply(cfg, "run." + name, node.data(), variant_set, lower_bound_set);
      continue;
    }
    for (const auto& [key, leaf] : node) {
      if (!leaf.empty()) throw ConfigError(name + "." + key, "nested sections are not supported");
      apply(cfg, name + "." + key, leaf.data(), variant_set, lower_bound_set);
    }
  }
  validate(cfg, variant_set, lower_bound_set);
  return cfg;
}

RunConfig parse_stream(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", fmt::format("config syntax error at line {}: {}", e.line(), e.message()));
  }
  return from_tree(tree);
}

}  // namespace

std::string_view to_string(ModelId id) {
  switch (id) {
    case ModelId::allen_cahn:
      return "allen_cahn";
    case ModelId::pme:
      return "pme";
    case ModelId::lubrication:
      return "lubrication";
    case ModelId::pnp:
      return "pnp";
  }
  return "unknown";
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", fmt::format("cannot open config file '{}'", path.string()));
  return parse_stream(in);
}

RunConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_stream(in);
}

}  // namespace posikit::cli
