#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mixlab/report.hpp"

using namespace mixlab;

namespace {

// MIXLAB_MAX_ELEMENTS overrides the default element cap; an explicit --cap
// still wins.
std::int64_t default_cap() {
  if (const char* env = std::getenv("MIXLAB_MAX_ELEMENTS")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0)
      throw InputError("MIXLAB_MAX_ELEMENTS must be a positive integer");
    return v;
  }
  return Budget{}.element_cap;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw InputError("cannot open '" + out_path + "' for writing");
  f << text;
}

std::vector<Elem> parse_set(const Group& g, const std::string& text) {
  std::vector<Elem> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t semi = text.find(';', pos);
    std::string part =
        semi == std::string::npos ? text.substr(pos) : text.substr(pos, semi - pos);
    if (!part.empty()) out.push_back(g.parse(part));
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  if (out.empty()) throw InputError("--set is empty; separate elements with ';'");
  return out;
}

Json set_args(const Group& g, const std::vector<Elem>& f) {
  Json arr = Json::array();
  for (const auto& x : f) arr.push_back(g.format(x));
  return Json{{"set", arr}};
}

struct Options {
  std::string instance;
  std::string set_text;
  std::string g_text;
  std::string a0_text;
  std::string x_text;
  std::string y_text;
  std::string out_path;
  std::string tsv_path;
  std::string report_path;
  std::string repro_dir;
  int radius = Budget{}.radius;
  std::int64_t cap = 0;  // resolved after env lookup
  bool cross_validate = false;

  Budget budget() const { return Budget{radius, cap}; }
};

int dispatch(const std::string& command, const Options& opt) {
  Budget b = opt.budget();

  if (command == "instances") {
    Json list = Json::array();
    for (const auto& inst : builtin_instances())
      list.push_back(Json{{"id", inst->id},
                          {"summary", inst->summary},
                          {"group", inst->g().name()},
                          {"element_grammar", inst->g().grammar_help()},
                          {"tags", inst->triple.tags}});
    emit(render(Json{{"instances", list}}), opt.out_path);
    return 0;
  }

  if (command == "verify") {
    std::ifstream f(opt.report_path, std::ios::binary);
    if (!f) throw InputError("cannot open report '" + opt.report_path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    std::string why;
    bool ok = verify_report(buf.str(), &why);
    Json out{{"verified", ok}};
    if (!ok) out["why"] = why;
    emit(render(out), opt.out_path);
    return 0;
  }

  if (command == "repro") {
    std::error_code ec;
    std::filesystem::create_directories(opt.repro_dir, ec);
    if (ec) throw InputError("cannot create '" + opt.repro_dir + "': " + ec.message());
    auto suite = repro_suite();
    Json written = Json::array();
    for (const auto& [name, body] : suite) {
      emit(body, opt.repro_dir + "/" + name);
      written.push_back(name);
    }
    emit(render(Json{{"directory", opt.repro_dir}, {"files", written}}), opt.out_path);
    return 0;
  }

  InstancePtr inst = find_instance(opt.instance);
  const Group& G = inst->g();

  if (command == "check-ss" || command == "check-wss") {
    if (command == "check-wss" || !opt.set_text.empty()) {
      std::vector<Elem> f = parse_set(G, opt.set_text);
      Json args = set_args(G, f);
      SearchOutcome<SSWitness> o = [&] {
        if (command == "check-wss") {
          Elem g = G.parse(opt.g_text);
          args["g"] = G.format(g);
          return wss_witness(*inst, f, g, b);
        }
        return ss_witness(*inst, f, b);
      }();
      emit(render(envelope(inst->id, command, args, b, ss_outcome_json(G, o))),
           opt.out_path);
      return 0;
    }
    Verdict v = decide(*inst, Condition::SS, b, opt.cross_validate);
    emit(render(envelope(inst->id, command, Json::object(), b, verdict_json(G, v))),
         opt.out_path);
    return 0;
  }

  if (command == "check-st") {
    if (!opt.set_text.empty()) {
      std::vector<Elem> f = parse_set(G, opt.set_text);
      ExceptionalSet e = st_exceptional(*inst, f, b);
      emit(render(envelope(inst->id, command, set_args(G, f), b, exceptional_json(G, e))),
           opt.out_path);
      return 0;
    }
    Verdict v = decide(*inst, Condition::ST, b, opt.cross_validate);
    emit(render(envelope(inst->id, command, Json::object(), b, verdict_json(G, v))),
         opt.out_path);
    return 0;
  }

  if (command == "check-malnormal" || command == "check-normalizer") {
    Verdict v = command == "check-malnormal" ? malnormality_scan(*inst, b)
                                             : normalizer_check(*inst, b);
    emit(render(envelope(inst->id, command, Json::object(), b, verdict_json(G, v))),
         opt.out_path);
    return 0;
  }

  if (command == "qn") {
    Elem g = G.parse(opt.g_text);
    QNReport r = qn_membership(inst->triple, g, b);
    emit(render(envelope(inst->id, "qn", Json{{"g", G.format(g)}}, b, qn_json(G, r))),
         opt.out_path);
    return 0;
  }

  if (command == "orbit") {
    Elem g = G.parse(opt.g_text);
    OrbitReport r = coset_orbit(inst->triple, g, b);
    emit(render(envelope(inst->id, "orbit", Json{{"g", G.format(g)}}, b, orbit_json(G, r))),
         opt.out_path);
    return 0;
  }

  if (command == "decay") {
    AlgebraElement x = AlgebraElement::lambda(inst->triple.G, G.parse(opt.x_text));
    AlgebraElement y = AlgebraElement::lambda(inst->triple.G, G.parse(opt.y_text));
    DecayProfile p = decay_profile(inst->triple, x, y, b);
    Json args{{"x", G.format(G.parse(opt.x_text))}, {"y", G.format(G.parse(opt.y_text))}};
    if (!opt.tsv_path.empty()) emit(decay_tsv(G, p), opt.tsv_path);
    emit(render(envelope(inst->id, "decay", args, b, decay_json(G, p))), opt.out_path);
    return 0;
  }

  if (command == "counterexample") {
    if (!inst->semidirect)
      throw InputError("counterexample needs a semidirect instance");
    Elem a0 = inst->semidirect->g->base()->parse(opt.a0_text);
    CounterexampleReport r = build_counterexample(*inst, a0, b);
    Json args{{"a0", inst->semidirect->g->base()->format(a0)}};
    emit(render(envelope(inst->id, "counterexample", args, b,
                         counterexample_json(*inst, r))),
         opt.out_path);
    return 0;
  }

  if (command == "corollary") {
    HypothesisReport r = corollary_hypotheses(*inst, b);
    emit(render(envelope(inst->id, "corollary", Json::object(), b,
                         hypothesis_json(*inst, r))),
         opt.out_path);
    return 0;
  }

  throw InputError("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact certificate tooling for subgroup mixing conditions\n"
      "run 'mixlab instances' for the built-in triples and their element grammars"};
  app.require_subcommand(1);
  Options opt;

  auto add_budget = [&opt](CLI::App* cmd) {
    cmd->add_option("--radius", opt.radius, "search ball radius")->capture_default_str();
    cmd->add_option("--cap", opt.cap, "element cap per enumeration");
  };
  auto add_instance = [&opt, &add_budget](CLI::App* cmd) {
    cmd->add_option("--instance", opt.instance, "built-in instance id")->required();
    add_budget(cmd);
  };

  CLI::App* instances = app.add_subcommand("instances", "list built-in instances");
  instances->add_option("--out", opt.out_path, "write the listing to a file");

  CLI::App* check = app.add_subcommand("check", "decide a condition or check a witness");
  check->require_subcommand(1);
  for (const char* name : {"ss", "st", "wss", "malnormal", "normalizer"}) {
    CLI::App* sub = check->add_subcommand(
        name, std::string("condition '") + name + "' on one instance");
    add_instance(sub);
    sub->add_option("--out", opt.out_path, "write the report to a file");
    if (std::string(name) == "ss" || std::string(name) == "st" ||
        std::string(name) == "wss")
      sub->add_option("--set", opt.set_text,
                      "';'-separated finite set F outside K (witness mode)");
    if (std::string(name) == "wss")
      sub->add_option("--g", opt.g_text, "right-hand element outside K")->required();
    if (std::string(name) == "ss" || std::string(name) == "st")
      sub->add_flag("--cross-validate", opt.cross_validate,
                    "re-run the other decision path and compare");
  }

  CLI::App* qn = app.add_subcommand("qn", "quasi-normalizer membership for one element");
  add_instance(qn);
  qn->add_option("--g", opt.g_text, "group element")->required();
  qn->add_option("--out", opt.out_path, "write the report to a file");

  CLI::App* orbit = app.add_subcommand("orbit", "K-coset orbit of an element under H");
  add_instance(orbit);
  orbit->add_option("--g", opt.g_text, "seed element outside K")->required();
  orbit->add_option("--out", opt.out_path, "write the report to a file");

  CLI::App* decay = app.add_subcommand(
      "decay", "exact mixing profile h -> |E_H(x lambda_h y)|_2^2 over the H-ball");
  add_instance(decay);
  decay->add_option("--x", opt.x_text, "group element, used as lambda_x")->required();
  decay->add_option("--y", opt.y_text, "group element, used as lambda_y")->required();
  decay->add_option("--tsv", opt.tsv_path, "also write a TSV profile to a file");
  decay->add_option("--out", opt.out_path, "write the report to a file");

  CLI::App* cex = app.add_subcommand(
      "counterexample",
      "finite-orbit commutant element showing H is not mixing relative to K");
  add_instance(cex);
  cex->add_option("--a0", opt.a0_text, "base-group seed element")->required();
  cex->add_option("--out", opt.out_path, "write the report to a file");

  CLI::App* cor = app.add_subcommand(
      "corollary", "check the combinatorial hypotheses behind the normalizer conclusion");
  add_instance(cor);
  cor->add_option("--out", opt.out_path, "write the report to a file");

  CLI::App* verify = app.add_subcommand("verify", "replay the certificates in a report");
  verify->add_option("report", opt.report_path, "report JSON file")->required();
  verify->add_option("--out", opt.out_path, "write the result to a file");

  CLI::App* repro = app.add_subcommand("repro", "write the fixed reproduction suite");
  repro->add_option("--out-dir", opt.repro_dir, "target directory")->required();
  repro->add_option("--out", opt.out_path, "write the file list to a file");

  CLI11_PARSE(app, argc, argv);

  std::string command;
  if (instances->parsed()) command = "instances";
  if (check->parsed())
    for (CLI::App* sub : check->get_subcommands()) command = "check-" + sub->get_name();
  if (qn->parsed()) command = "qn";
  if (orbit->parsed()) command = "orbit";
  if (decay->parsed()) command = "decay";
  if (cex->parsed()) command = "counterexample";
  if (cor->parsed()) command = "corollary";
  if (verify->parsed()) command = "verify";
  if (repro->parsed()) command = "repro";

  auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (opt.cap == 0) opt.cap = default_cap();
    code = dispatch(command, opt);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    code = 2;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency error: " << e.what() << "\n";
    code = 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = 1;
  }
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  // timing goes to stderr only; report bodies stay byte-reproducible
  std::cerr << "elapsed_ms " << elapsed.count() << "\n";
  return code;
}
