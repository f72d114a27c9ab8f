#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "effinv/census.hpp"
#include "effinv/constraints.hpp"
#include "effinv/genus1.hpp"
#include "effinv/recursion.hpp"
#include "effinv/series.hpp"
#include "effinv/target_json.hpp"

using namespace effinv;
using ordered_json = nlohmann::ordered_json;

namespace {

int truncation_default() {
  if (const char* env = std::getenv("EFFINT_TRUNCATION"))
    return std::max(1, std::atoi(env));
  return kDefaultTruncationOrder;
}

TargetSpec load_target_arg(const std::string& path) {
  if (path == "-") return load_target(std::cin, "<stdin>");
  return load_target_file(path);
}

long parse_long(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    long out = std::stol(text, &used);
    if (used != text.size()) throw ParseError(what + ": trailing characters");
    return out;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(what + ": cannot parse '" + text + "'");
  }
}

std::vector<long> parse_longs(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_long(item, "list entry"));
  }
  return out;
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(Integer(text));
  return Rational(Integer(text.substr(0, slash)),
                  Integer(text.substr(slash + 1)));
}

// insertion grammar: '*'-separated factors "name" or "name^power" with
// names h1..hk (h aliases h1), zeta, psidf; "1" or "-" is trivial
MarkingData parse_insertion(const std::string& text, int curve_rank) {
  MarkingData out;
  out.h_exp.assign(curve_rank, 0);
  if (text.empty() || text == "1" || text == "-") return out;
  std::stringstream ss(text);
  std::string factor;
  while (std::getline(ss, factor, '*')) {
    if (factor.empty()) continue;
    std::string name = factor;
    unsigned power = 1;
    if (auto caret = factor.find('^'); caret != std::string::npos) {
      name = factor.substr(0, caret);
      power = static_cast<unsigned>(std::stoul(factor.substr(caret + 1)));
    }
    if (name == "h" && curve_rank == 1) name = "h1";
    if (name == "zeta") {
      out.zeta_exp += power;
    } else if (name == "psidf") {
      out.psi_df += power;
    } else if (name == "psi") {
      out.psi_domain += power;
    } else if (name.size() > 1 && name[0] == 'h') {
      int index = std::stoi(name.substr(1));
      if (index < 1 || index > curve_rank)
        throw ParseError("unknown hyperplane class: " + name);
      out.h_exp[index - 1] += power;
    } else {
      throw ParseError("cannot parse insertion factor: " + factor);
    }
  }
  return out;
}

ordered_json rational_entry(const Rational& x) {
  ordered_json j;
  j["num"] = integer_json(numerator(x));
  j["den"] = integer_json(denominator(x));
  return j;
}

int run_analyze(const TargetSpec& target, const DiscreteData& data,
                const std::vector<int>& insertion_degrees, int psi_power,
                bool as_json) {
  FeasibilityReport rep = analyze(data, target, insertion_degrees, psi_power);
  const char* status = rep.vanish == ModuliStatus::Empty       ? "empty"
                       : rep.vanish == ModuliStatus::ZeroCycle ? "zero-cycle"
                                                               : "unknown";
  if (as_json) {
    ordered_json j;
    j["balancing_defect"] = rep.balancing_defect;
    j["feasible"] = rep.feasible;
    j["all_minus_one_forced"] = rep.all_minus_one_forced;
    j["red_vdim"] = rep.red_vdim;
    j["ci_vdim"] = rep.ci_vdim;
    j["status"] = status;
    j["reasons"] = rep.reasons;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "balancing defect    " << rep.balancing_defect << "\n"
              << "feasible            " << (rep.feasible ? "yes" : "no")
              << "\n"
              << "all -1 forced       "
              << (rep.all_minus_one_forced ? "yes" : "no") << "\n"
              << "reduced vdim        " << rep.red_vdim << "\n"
              << "stable-map vdim     " << rep.ci_vdim << "\n"
              << "status              " << status << "\n";
    if (!rep.reasons.empty()) {
      std::cout << "reasons            ";
      for (const std::string& r : rep.reasons) std::cout << " " << r;
      std::cout << "\n";
    }
  }
  return rep.feasible ? 0 : 2;
}

int run_census(const TargetSpec& target, int from, int to, bool as_json) {
  ordered_json rows = ordered_json::array();
  for (int g = from; g <= to; ++g) {
    auto indices = enumerate_basic(target, g);
    if (as_json) {
      ordered_json per;
      per["genus"] = g;
      per["count"] = indices.size();
      per["classes"] = ordered_json::array();
      for (const BasicIndex& idx : indices) {
        ordered_json row;
        row["beta"] = idx.beta.beta_x;
        row["log_degree"] = idx.log_degree();
        row["markings"] = idx.markings();
        if (idx.fiber_dominating_range) row["fiber_dominating_range"] = true;
        per["classes"].push_back(row);
      }
      rows.push_back(per);
    } else {
      for (const BasicIndex& idx : indices) {
        std::cout << "g=" << g << " beta=[";
        for (std::size_t i = 0; i < idx.beta.beta_x.size(); ++i)
          std::cout << (i ? "," : "") << idx.beta.beta_x[i];
        std::cout << "] t=" << idx.log_degree()
                  << " markings=" << idx.markings();
        if (idx.fiber_dominating_range) std::cout << "  [fiber-window]";
        std::cout << "\n";
      }
      std::cout << "g=" << g << " count=" << indices.size() << "\n";
    }
  }
  if (as_json) std::cout << rows.dump(2) << "\n";
  return 0;
}

int run_genus1(const TargetSpec& target, int psi_power,
               const std::vector<std::string>& insertion_texts,
               const Rational& normalization, bool as_json) {
  GenusOneModel model = build_genus1(target, normalization);
  std::vector<GradedElement> insertions;
  for (const std::string& text : insertion_texts) {
    MarkingData m = parse_insertion(text, target.ambient.curve_rank);
    GradedElement cls = model.ring.one();
    for (std::size_t i = 0; i < m.h_exp.size(); ++i)
      if (m.h_exp[i] > 0)
        cls = cls * pow(model.hyperplane(static_cast<int>(i)), m.h_exp[i]);
    if (m.zeta_exp > 0) cls = cls * pow(model.log_class, m.zeta_exp);
    if (m.psi_df > 0) cls = cls * pow(-model.log_class, m.psi_df);
    insertions.push_back(cls);
  }
  Rational value = genus1_invariant(model, psi_power, insertions);
  GradedElement capped = model.red_cycle;
  for (int i = 0; i < psi_power; ++i) capped = capped * model.psi_min;
  for (const GradedElement& a : insertions) capped = capped * a;
  if (as_json) {
    ordered_json j;
    j["value"] = rational_entry(value);
    j["red_cycle"] = model.ring.to_string(model.red_cycle);
    j["vir_cycle"] = model.ring.to_string(model.vir_cycle);
    j["psi_min"] = model.ring.to_string(model.psi_min);
    j["capped_class"] = model.ring.to_string(capped);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "value       " << to_string(value) << "\n"
              << "red cycle   " << model.ring.to_string(model.red_cycle)
              << "\n"
              << "vir cycle   " << model.ring.to_string(model.vir_cycle)
              << "\n"
              << "psi_min     " << model.ring.to_string(model.psi_min) << "\n"
              << "capped      " << model.ring.to_string(capped) << "\n";
  }
  return 0;
}

int run_reduce(const TargetSpec& target, Token token, bool with_trace,
               bool as_json) {
  ReduceOptions options;
  options.record_trace = with_trace;
  ReducedForm form = reduce_to_basic(target, std::move(token), options);
  if (as_json) {
    ordered_json j;
    j["basic"] = ordered_json::array();
    for (const auto& [key, coeff] : form.basic) {
      ordered_json row;
      row["genus"] = key.genus;
      row["beta"] = key.beta_x;
      row["log_degree"] = key.t;
      row["coefficient"] = rational_entry(coeff);
      j["basic"].push_back(row);
    }
    j["value"] = rational_entry(form.value);
    if (with_trace) j["trace"] = form.trace;
    std::cout << j.dump(2) << "\n";
  } else {
    if (form.is_zero()) std::cout << "0\n";
    for (const auto& [key, coeff] : form.basic)
      std::cout << to_string(coeff) << " * " << key.str() << "\n";
    if (form.value != 0)
      std::cout << "evaluated part " << to_string(form.value) << "\n";
    if (with_trace)
      for (const std::string& line : form.trace)
        std::cout << "  " << line << "\n";
  }
  return 0;
}

int run_roots(long r, long d, long ell, const std::vector<long>& contacts,
              const std::vector<long>& orders, int psi_power, bool as_json) {
  NormalizedRoot n = normalize_target(r, d, ell);
  std::vector<SectorData> downstairs;
  for (std::size_t i = 0; i < contacts.size(); ++i) {
    SectorData s;
    s.contact = contacts[i];
    s.order = i < orders.size() ? orders[i] : 1;
    s.base_order = s.order;
    s.age = frac(Rational(s.contact, s.order));
    downstairs.push_back(s);
  }
  auto lifted = lift_contacts(downstairs, ell);
  Rational factor =
      pow_rat(Rational(ell), static_cast<unsigned>(psi_power) + 1);
  if (as_json) {
    ordered_json j;
    j["normalized"] = {{"r_hat", n.r_hat},
                       {"d_hat", n.d_hat},
                       {"a", n.a},
                       {"b", n.b}};
    j["lifted"] = ordered_json::array();
    for (const SectorData& s : lifted) {
      ordered_json row;
      row["contact"] = s.contact;
      row["order"] = s.order;
      row["base_order"] = s.base_order;
      row["age"] = rational_entry(s.age);
      j["lifted"].push_back(row);
    }
    j["rescaling_factor"] = rational_entry(factor);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "normalized (r,d,ell=1): r_hat=" << n.r_hat
              << " d_hat=" << n.d_hat << " a=" << n.a << " b=" << n.b << "\n";
    for (std::size_t i = 0; i < lifted.size(); ++i) {
      std::cout << "marking " << i + 1 << ": contact "
                << downstairs[i].contact << " -> " << lifted[i].contact
                << ", order " << lifted[i].order << ", age "
                << to_string(lifted[i].age) << "\n";
    }
    std::cout << "rescaling factor ell^(1+k) = " << to_string(factor) << "\n";
  }
  return 0;
}

int run_thresholds(const std::string& family, long max_d, long max_n,
                   bool as_json) {
  if (family == "pn-hypersurface") {
    auto exc = hypersurface_exceptions(max_d, max_n);
    if (as_json) {
      ordered_json j = ordered_json::array();
      for (const auto& e : exc) {
        ordered_json row;
        row["d"] = e.d;
        row["N"] = e.N;
        row["in_regime"] = e.in_regime;
        j.push_back(row);
      }
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << std::left << std::setw(6) << "d" << std::setw(6) << "N"
                << "note\n";
      for (const auto& e : exc)
        std::cout << std::left << std::setw(6) << e.d << std::setw(6) << e.N
                  << (e.in_regime ? "" : "out-of-regime") << "\n";
    }
    return 0;
  }
  if (family == "fano-ci") {
    auto exc = fano_ci_exceptions(max_n);
    if (as_json) {
      ordered_json j = ordered_json::array();
      for (const auto& tuple : exc) j.push_back(tuple);
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& tuple : exc) {
        std::cout << "(";
        for (std::size_t i = 0; i < tuple.size(); ++i)
          std::cout << (i ? "," : "") << tuple[i];
        std::cout << ")\n";
      }
    }
    return 0;
  }
  throw ParseError("unknown threshold family: " + family);
}

int run_check_pushforward(int m, int order, bool as_json) {
  RingSpec spec;
  for (int i = 1; i <= m; ++i)
    spec.generators.push_back({"x" + std::to_string(i), 1, 2});
  GradedAlgebra base(spec);
  std::vector<GradedElement> e_classes;
  for (int i = 0; i < m; ++i) e_classes.push_back(base.generator(i));
  bool ok = pushforward_min_check(base, e_classes, order);
  if (as_json) {
    ordered_json j;
    j["m"] = m;
    j["order"] = order;
    j["result"] = ok ? "pass" : "fail";
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "pushforward check m=" << m << " order=" << order << ": "
              << (ok ? "pass" : "fail") << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact calculus of effective invariants of punctured maps"};
  app.require_subcommand(1);

  std::string target_path;
  std::string format = "table";
  std::string beta_text = "0";
  std::string contacts_text;
  std::string orders_text;
  std::string insertions_text;
  std::string genus_range = "2..10";
  std::string family = "pn-hypersurface";
  std::string normalization_text = "1/24";
  int genus = 2;
  int psi_power = 0;
  long tlog = -1;
  long root_r = 1, root_d = 1, root_ell = 1;
  long max_d = 0, max_n = 0;
  int bundle_m = 2;
  int order = truncation_default();
  bool with_trace = false;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format: table or json")
        ->check(CLI::IsMember({"table", "json"}));
  };

  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "balancing, dimensions, vanishing");
  analyze_cmd->add_option("--target", target_path, "target spec JSON file")
      ->required();
  analyze_cmd->add_option("--genus", genus)->required();
  analyze_cmd->add_option("--beta", beta_text, "curve class coordinates");
  analyze_cmd->add_option("--tlog", tlog, "log-bundle degree of the class");
  analyze_cmd->add_option("--contacts", contacts_text, "contact orders");
  analyze_cmd->add_option("--orders", orders_text, "gerbe orders");
  analyze_cmd->add_option("--insertions", insertions_text,
                          "per-marking insertion monomials");
  analyze_cmd->add_option("--k", psi_power, "psi_min power");
  add_format(analyze_cmd);

  CLI::App* census_cmd =
      app.add_subcommand("census", "basic effective invariant census");
  census_cmd->add_option("--target", target_path)->required();
  census_cmd->add_option("--genus-range", genus_range, "a..b");
  add_format(census_cmd);

  CLI::App* genus1_cmd =
      app.add_subcommand("genus1", "closed genus-one invariants");
  genus1_cmd->add_option("--target", target_path)->required();
  genus1_cmd->add_option("--k", psi_power, "psi_min power");
  genus1_cmd->add_option("--insertions", insertions_text,
                         "comma-separated insertion monomials");
  genus1_cmd->add_option("--normalization", normalization_text,
                         "degree of the hodge factor (default 1/24)");
  add_format(genus1_cmd);

  CLI::App* reduce_cmd =
      app.add_subcommand("reduce", "reduce an invariant to basic symbols");
  reduce_cmd->add_option("--target", target_path)->required();
  reduce_cmd->add_option("--genus", genus)->required();
  reduce_cmd->add_option("--beta", beta_text);
  reduce_cmd->add_option("--tlog", tlog);
  reduce_cmd->add_option("--contacts", contacts_text)->required();
  reduce_cmd->add_option("--orders", orders_text);
  reduce_cmd->add_option("--insertions", insertions_text);
  reduce_cmd->add_option("--k", psi_power);
  reduce_cmd->add_flag("--trace", with_trace, "print the provenance trace");
  add_format(reduce_cmd);

  CLI::App* roots_cmd =
      app.add_subcommand("roots", "root-change data and rescaling");
  roots_cmd->add_option("--ell", root_ell)->required();
  roots_cmd->add_option("--r", root_r);
  roots_cmd->add_option("--d", root_d);
  roots_cmd->add_option("--contacts", contacts_text,
                        "contact orders downstairs");
  roots_cmd->add_option("--orders", orders_text, "gerbe orders downstairs");
  roots_cmd->add_option("--k", psi_power);
  add_format(roots_cmd);

  CLI::App* thresholds_cmd =
      app.add_subcommand("thresholds", "vanishing exception tables");
  thresholds_cmd->add_option("--family", family,
                             "pn-hypersurface or fano-ci");
  thresholds_cmd->add_option("--max-d", max_d);
  thresholds_cmd->add_option("--max-n", max_n);
  add_format(thresholds_cmd);

  CLI::App* push_cmd = app.add_subcommand(
      "check-pushforward", "verify the minimal-pole pushforward identity");
  push_cmd->add_option("--m", bundle_m, "number of factors");
  push_cmd->add_option("--order", order, "series truncation order");
  add_format(push_cmd);

  CLI11_PARSE(app, argc, argv);
  bool as_json = format == "json";

  try {
    if (app.got_subcommand(thresholds_cmd)) {
      if (max_d == 0) max_d = 100;
      if (max_n == 0) max_n = family == "fano-ci" ? 60 : 100;
      return run_thresholds(family, max_d, max_n, as_json);
    }
    if (app.got_subcommand(push_cmd))
      return run_check_pushforward(bundle_m, order, as_json);
    if (app.got_subcommand(roots_cmd))
      return run_roots(root_r, root_d, root_ell, parse_longs(contacts_text),
                       parse_longs(orders_text), psi_power, as_json);

    TargetSpec target = load_target_arg(target_path);

    if (app.got_subcommand(census_cmd)) {
      auto dots = genus_range.find("..");
      if (dots == std::string::npos)
        throw ParseError("--genus-range expects a..b");
      int from = static_cast<int>(
          parse_long(genus_range.substr(0, dots), "--genus-range"));
      int to = static_cast<int>(
          parse_long(genus_range.substr(dots + 2), "--genus-range"));
      return run_census(target, from, to, as_json);
    }

    if (app.got_subcommand(genus1_cmd)) {
      std::vector<std::string> insertion_texts;
      std::stringstream ss(insertions_text);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) insertion_texts.push_back(item);
      return run_genus1(target, psi_power, insertion_texts,
                        parse_rational(normalization_text), as_json);
    }

    // analyze and reduce share the token construction
    std::vector<long> beta_x = parse_longs(beta_text);
    if (static_cast<int>(beta_x.size()) != target.ambient.curve_rank)
      throw ParseError("--beta needs " +
                       std::to_string(target.ambient.curve_rank) +
                       " coordinates");
    long t_value = tlog;
    if (t_value < 0) {
      if (target.bundle.rank() == 1) {
        t_value = 0;
        for (std::size_t i = 0; i < beta_x.size(); ++i)
          t_value += target.bundle.summand_degrees[0][i] * beta_x[i];
      } else {
        t_value = 2 * genus - 2;
      }
    }
    std::vector<long> contacts = parse_longs(contacts_text);
    std::vector<long> orders = parse_longs(orders_text);
    std::vector<std::string> insertion_texts(contacts.size(), "1");
    if (!insertions_text.empty()) {
      std::stringstream ss(insertions_text);
      std::string item;
      std::size_t index = 0;
      while (std::getline(ss, item, ',') && index < insertion_texts.size())
        insertion_texts[index++] = item;
    }

    Token token;
    token.genus = genus;
    token.beta = CurveClass{beta_x, t_value};
    token.psi_power = psi_power;
    for (std::size_t i = 0; i < contacts.size(); ++i) {
      MarkingData m =
          parse_insertion(insertion_texts[i], target.ambient.curve_rank);
      m.contact = contacts[i];
      m.order = i < orders.size() ? orders[i] : 1;
      token.markings.push_back(m);
    }

    if (app.got_subcommand(analyze_cmd))
      return run_analyze(target, token.discrete_data(),
                         token.insertion_degrees(), psi_power, as_json);
    if (app.got_subcommand(reduce_cmd))
      return run_reduce(target, std::move(token), with_trace, as_json);
    throw ParseError("no subcommand selected");
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const OutOfRegimeError& e) {
    std::cerr << "out of regime: " << e.what() << "\n";
    return 2;
  } catch (const InvalidDataError& e) {
    std::cerr << "invalid data: " << e.what() << "\n";
    return 2;
  } catch (const ReductionError& e) {
    std::cerr << "reduction not guaranteed: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedTokenError& e) {
    std::cerr << "unsupported token: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
