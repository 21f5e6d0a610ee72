#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <probicat/model.hpp>

using namespace probicat;

namespace {

struct Options {
  std::string command;
  std::string model;
  std::string backend;
  std::string probicat;
  int scope = 2;
  int max_iter = kDefaultMaxIter;
  std::string report;
  std::string seed_order = "canonical";
  std::string sigma;
  std::string reflection;
  std::string n;
  std::string target;
  std::string mode;
  std::string left;
  std::string right;
  bool timing = false;
};

// What a command hands back: named checks plus free-form tables.
struct Outcome {
  Report report;
  json tables = json::object();
};

json echo(const Options& o) {
  json j{{"name", o.command}, {"model", o.model}, {"scope", o.scope},
         {"max_iter", o.max_iter}, {"seed_order", o.seed_order}};
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) j[key] = v;
  };
  put("backend", o.backend);
  put("probicategory", o.probicat);
  put("sigma", o.sigma);
  put("reflection", o.reflection);
  put("n", o.n);
  put("target", o.target);
  put("mode", o.mode);
  put("left", o.left);
  put("right", o.right);
  return j;
}

bool backend_matches(const ProbicatEntry& e, const std::string& backend) {
  return backend.empty() || e.backend() == backend;
}

const ProbicatEntry& entry_for(const Model& m, const Options& o, const std::string& name) {
  auto it = m.probicategories.find(name);
  if (it == m.probicategories.end())
    throw InputError("probicategory '" + name + "' is not defined");
  if (!backend_matches(it->second, o.backend))
    throw InputError("probicategory '" + name + "' is on backend " + it->second.backend() +
                     ", not " + o.backend);
  return it->second;
}

/// Probicategories addressed by --probicat and --backend, in name order.
std::vector<std::string> selected(const Model& m, const Options& o) {
  std::vector<std::string> out;
  if (!o.probicat.empty()) {
    entry_for(m, o, o.probicat);
    return {o.probicat};
  }
  for (const auto& [name, e] : m.probicategories)
    if (backend_matches(e, o.backend)) out.push_back(name);
  if (out.empty()) throw InputError("no probicategory matches the selection");
  return out;
}

template <class V>
Scope<V> scope_of(const Probicategory<V>& p, const Options& o) {
  return default_scope(p, o.scope);
}

template <class V>
json scope_sizes(const Scope<V>& s) {
  json j = json::array();
  for (const auto& c : s.cells) j.push_back(c.size());
  return j;
}

json conditions_table(const Report& conditions) {
  json t = json::object();
  for (int k = 1; k <= 6; ++k) {
    bool ok = true;
    for (const auto& e : conditions.entries())
      if (e.name.rfind(std::to_string(k), 0) == 0 && !e.result.ok) ok = false;
    t[std::to_string(k)] = ok ? "held" : "failed";
  }
  return t;
}

// ---------------------------------------------------------------------------
// Commands.

Outcome cmd_check(const Model& m, const Options& o) {
  Outcome out;
  for (const auto& name : selected(m, o)) {
    std::visit(
        [&](const auto& p) {
          const auto scope = scope_of(p, o);
          out.report.merge(check_probicat(p, scope), name + ":");
          out.tables["probicategories"][name] = {
              {"backend", m.probicategories.at(name).backend()},
              {"objects", p.objects()},
              {"scope_cells", scope_sizes(scope)}};
        },
        m.probicategories.at(name).p);
  }
  return out;
}

/// The (x, y) whose hom category carries f, first in canonical order.
template <class V>
std::optional<int> pair_carrying(const Probicategory<V>& p, const PresheafOf<V>& f) {
  for (int i = 0; i < p.size() * p.size(); ++i)
    if (*p.hom(i / p.size(), i % p.size()) == f.base()) return i;
  return std::nullopt;
}

Outcome cmd_convolve(const Model& m, const Options& o) {
  Outcome out;
  for (const auto& name : selected(m, o)) {
    std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          using Pr = typename P::Presheaf;
          const int n = p.size();
          json rows = json::array();
          auto run = [&](int x, int y, int z, const Pr& f, const Pr& g) {
            const Pr h = conv_compose(p, x, y, z, f, g);
            const std::string label = name + ":compose[" + p.index_label(x, y, z) + "]";
            out.report.add(label, check_presheaf(h));
            rows.push_back({{"xyz", p.index_label(x, y, z)},
                            {"left", f.to_json()},
                            {"right", g.to_json()},
                            {"result", h.to_json()}});
          };
          if (!o.left.empty() || !o.right.empty()) {
            auto named = [&](const std::string& key) -> Pr {
              auto it = m.presheaves.find(key);
              if (it == m.presheaves.end())
                throw InputError("presheaf '" + key + "' is not defined");
              const Pr* f = std::get_if<Pr>(&it->second.value);
              if (!f) throw InputError("presheaf '" + key + "' is on another backend");
              return *f;
            };
            if (o.left.empty() || o.right.empty())
              throw InputError("convolve needs both --left and --right");
            const Pr f = named(o.left), g = named(o.right);
            const auto fp = pair_carrying(p, f), gp = pair_carrying(p, g);
            if (!fp || !gp || *fp / n != *gp % n)
              throw InputError("--left and --right are not composable 1-cells of " + name);
            run(*gp / n, *gp % n, *fp % n, f, g);
          } else {
            const auto scope = scope_of(p, o);
            for (int x = 0; x < n; ++x)
              for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z)
                  for (const auto& f : scope.at(y, z))
                    for (const auto& g : scope.at(x, y)) run(x, y, z, f, g);
          }
          json ids = json::object();
          for (int x = 0; x < n; ++x) ids[p.objects()[x]] = conv_identity(p, x).to_json();
          out.tables["convolution"][name] = {{"compose", rows}, {"identity", ids}};
        },
        m.probicategories.at(name).p);
  }
  return out;
}

template <class V>
void reflection_report(Outcome& out, const std::string& label, ReflectionSetup<V> s) {
  out.report.merge(check_reflector(s), label + ":");
  out.report.merge(check_generators(s, GeneratorMode::generating), label + ":");
  out.report.merge(check_generators(s, GeneratorMode::cogenerating), label + ":");
  Report conditions;
  int first = 0;
  for (int k = 1; k <= 6; ++k) {
    const Report r = reflection_condition(s, k);
    conditions.merge(r);
    if (r.passed() && first == 0) first = k;
  }
  json table{{"conditions", conditions_table(conditions)},
             {"local_cells", scope_sizes(s.local)}};
  if (first == 0) {
    out.report.add(label + ":compatible",
                   Validation::fail("compatible", "no condition among 1-6 holds in scope",
                                    conditions.first_failure()->result.witness));
  } else {
    out.report.add(label + ":compatible", Validation::pass(json{{"condition", first}}));
    const Structure<V> t = transfer_structure(s);
    out.report.merge(verify_strong(s, t), label + ":");
    out.report.merge(biclosed_validate(t, s.local), label + ":transferred:");
    table["condition"] = first;
  }
  out.tables["reflections"][label] = std::move(table);
}

Outcome cmd_reflect(const Model& m, const Options& o) {
  Outcome out;
  std::vector<std::string> names;
  if (!o.reflection.empty()) {
    if (!m.reflections.count(o.reflection))
      throw InputError("reflection '" + o.reflection + "' is not defined");
    names.push_back(o.reflection);
  } else {
    for (const auto& [name, r] : m.reflections)
      if (backend_matches(m.probicategories.at(r.probicategory), o.backend) &&
          (o.probicat.empty() || o.probicat == r.probicategory))
        names.push_back(name);
  }
  if (names.empty()) throw InputError("the model defines no matching reflection");
  for (const auto& name : names) {
    const ReflectionEntry& r = m.reflections.at(name);
    std::visit(
        [&](const auto& p) {
          using V = std::conditional_t<std::is_same_v<std::decay_t<decltype(p)>,
                                                      Probicategory<SetV>>,
                                       SetV, QuantaleV>;
          ReflectionSetup<V> s =
              make_setup(p, model_reflector<V>(m, r), scope_of(p, o));
          if constexpr (std::is_same_v<V, QuantaleV>) {
            if (r.gens) s.gens = *r.gens;
            if (r.cogens) s.cogens = *r.cogens;
          }
          reflection_report(out, name, std::move(s));
        },
        entry_for(m, o, r.probicategory).p);
  }
  return out;
}

std::vector<std::string> sigma_names(const Model& m, const Options& o) {
  if (!o.sigma.empty()) {
    if (!m.sigma_sets.count(o.sigma)) throw InputError("sigma set '" + o.sigma + "' is not defined");
    return {o.sigma};
  }
  std::vector<std::string> out;
  for (const auto& [name, s] : m.sigma_sets)
    if (backend_matches(m.probicategories.at(s.probicategory), o.backend) &&
        (o.probicat.empty() || o.probicat == s.probicategory))
      out.push_back(name);
  if (out.empty()) throw InputError("the model defines no matching sigma set");
  return out;
}

Outcome cmd_localise(const Model& m, const Options& o) {
  Outcome out;
  for (const auto& name : sigma_names(m, o)) {
    const SigmaEntry& se = m.sigma_sets.at(name);
    std::visit(
        [&](const auto& p) {
          const auto l = localise_probicat(p, se.sigma, scope_of(p, o), o.max_iter);
          out.report.merge(l.report, name + ":");
          json sig = json::array();
          for (const auto& s : se.sigma) sig.push_back(s.to_json());
          json table{{"probicategory", se.probicategory},
                     {"sigma", sig},
                     {"conditions", conditions_table(l.conditions)},
                     {"local_cells", scope_sizes(l.setup.local)}};
          if (l.condition > 0) table["condition"] = l.condition;
          out.tables["localisations"][name] = std::move(table);
        },
        entry_for(m, o, se.probicategory).p);
  }
  return out;
}

/// Extension entries addressed by --n (yoneda, localisation or a model name).
std::vector<std::pair<std::string, ExtensionEntry>> extension_entries(const Model& m,
                                                                      const Options& o,
                                                                      const std::string& kind) {
  std::vector<std::pair<std::string, ExtensionEntry>> out;
  if (kind == "yoneda") {
    if (!o.target.empty()) throw InputError("--target needs an explicit N table");
    for (const auto& name : selected(m, o)) out.push_back({name, {name}});
  } else if (kind == "localisation") {
    if (!o.target.empty()) throw InputError("--target needs an explicit N table");
    for (const auto& s : sigma_names(m, o)) {
      ExtensionEntry e;
      e.probicategory = m.sigma_sets.at(s).probicategory;
      e.kind = ExtensionEntry::Kind::localisation;
      e.sigma = s;
      out.push_back({e.probicategory + "/" + s, e});
    }
  } else {
    auto it = m.extensions.find(kind);
    if (it == m.extensions.end())
      throw InputError("--n must be yoneda, localisation or an extension of the model");
    ExtensionEntry e = it->second;
    if (!o.target.empty()) {
      if (e.kind != ExtensionEntry::Kind::explicit_n)
        throw InputError("--target needs an explicit N table");
      if (!m.reflections.count(o.target))
        throw InputError("reflection '" + o.target + "' is not defined");
      e.reflection = o.target;
    }
    out.push_back({kind, e});
  }
  return out;
}

Outcome cmd_extend(const Model& m, const Options& o) {
  if (o.n.empty()) throw InputError("extend needs --n");
  Outcome out;
  for (const auto& [label, e] : extension_entries(m, o, o.n)) {
    std::visit(
        [&](const auto& p) {
          const auto s = model_extension(m, e, p, scope_of(p, o), o.max_iter);
          const auto ext = extend_structure(s);
          out.report.merge(ext.report, label + ":");
          out.tables["extensions"][label] = {{"probicategory", e.probicategory},
                                             {"scope_cells", scope_sizes(s.scope)},
                                             {"structure", ext.structure.has_value()}};
        },
        entry_for(m, o, e.probicategory).p);
  }
  return out;
}

Outcome cmd_compare(const Model& m, const Options& o) {
  OracleMode mode;
  if (o.mode == "yoneda") mode = OracleMode::yoneda;
  else if (o.mode == "localisation") mode = OracleMode::localisation;
  else throw InputError("--mode must be yoneda or localisation");
  Outcome out;
  for (const auto& [label, e] : extension_entries(m, o, o.mode)) {
    std::visit(
        [&](const auto& p) {
          const auto s = model_extension(m, e, p, scope_of(p, o), o.max_iter);
          const Report r = compare_with_oracle(s, mode);
          out.report.merge(r, label + ":");
          json w = json::object();
          for (const auto& entry : r.entries())
            if (entry.result.ok) w[entry.name] = entry.result.witness;
          out.tables["comparisons"][label] = {{"probicategory", e.probicategory},
                                              {"witnesses", w}};
        },
        entry_for(m, o, e.probicategory).p);
  }
  return out;
}

Outcome dispatch(const Model& m, const Options& o) {
  if (o.command == "check") return cmd_check(m, o);
  if (o.command == "convolve") return cmd_convolve(m, o);
  if (o.command == "reflect") return cmd_reflect(m, o);
  if (o.command == "localise") return cmd_localise(m, o);
  if (o.command == "extend") return cmd_extend(m, o);
  return cmd_compare(m, o);
}

void validate_flags(const Options& o) {
  if (o.seed_order != "canonical") throw InputError("--seed-order supports only canonical");
  if (o.scope < 0) throw InputError("--scope must be non-negative");
  if (o.max_iter < 1) throw InputError("--max-iter must be positive");
  if (!o.backend.empty() && o.backend != "finset" && o.backend.rfind("quantale:", 0) != 0)
    throw InputError("--backend must be finset or quantale:NAME");
}

int emit(const Options& o, json report) {
  const std::string text = report.dump(2) + "\n";
  if (o.report.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.report, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write report " << o.report << "\n";
      return 2;
    }
    f << text;
    std::cout << o.command << ": " << report.at("status").get<std::string>() << "\n";
  }
  const std::string status = report.at("status");
  return status == "pass" ? 0 : status == "fail" ? 1 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for finite probicategories"};
  app.require_subcommand(1, 1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"check", "Validate the probicategories and their convolution laws"},
      {"convolve", "Compute Day convolutions"},
      {"reflect", "Check a reflection against conditions 1-6"},
      {"localise", "Localise at a set of 2-cells"},
      {"extend", "Extend along N and validate the result"},
      {"compare", "Compare an extension with its oracle"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--model", o.model, "Model file")->required();
    sub->add_option("--backend", o.backend, "finset or quantale:NAME");
    sub->add_option("--probicat", o.probicat, "Probicategory name");
    sub->add_option("--scope", o.scope, "Largest set per object in enumerated scopes");
    sub->add_option("--max-iter", o.max_iter, "Sweep limit of set reflections");
    sub->add_option("--report", o.report, "Write the JSON report here");
    sub->add_option("--seed-order", o.seed_order, "Enumeration order (canonical)");
    sub->add_flag("--timing", o.timing, "Add wall-clock timing to the report");
    if (name == "localise" || name == "extend" || name == "compare")
      sub->add_option("--sigma", o.sigma, "Sigma set name");
    if (name == "reflect") sub->add_option("--reflection", o.reflection, "Reflection name");
    if (name == "extend") {
      sub->add_option("--n", o.n, "yoneda, localisation or an extension name");
      sub->add_option("--target", o.target, "Reflection giving the target subcategory");
    }
    if (name == "compare") sub->add_option("--mode", o.mode, "yoneda or localisation")->required();
    if (name == "convolve") {
      sub->add_option("--left", o.left, "Presheaf F in F∘G");
      sub->add_option("--right", o.right, "Presheaf G in F∘G");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  o.command = app.get_subcommands().front()->get_name();

  json report{{"schema", kModelSchema}, {"command", echo(o)}};
  const auto start = std::chrono::steady_clock::now();
  try {
    validate_flags(o);
    const Model m = parse_model_file(o.model);
    Outcome out = dispatch(m, o);
    json j = out.report.to_json();
    json failures = json::array();
    std::vector<std::string> names;
    for (const auto& e : out.report.entries())
      if (!e.result.ok) names.push_back(e.name);
    std::sort(names.begin(), names.end());
    for (auto& n : names) failures.push_back(n);
    report["status"] = j.at("status");
    report["checks"] = j.at("checks");
    report["failures"] = failures;
    report["tables"] = out.tables;
  } catch (const Error& e) {
    // Input errors, divergence past --max-iter and exhausted search caps.
    report["status"] = "error";
    report["error"] = e.what();
    std::cerr << "error: " << e.what() << "\n";
  }
  if (o.timing)
    report["timing_ms"] = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
  return emit(o, std::move(report));
}
