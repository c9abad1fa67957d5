// sessionvm: check, run, trace, diff, gen and golden over .cll programs.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sessionvm/cll.hpp"
#include "sessionvm/cllb.hpp"
#include "sessionvm/frontend.hpp"
#include "sessionvm/harness.hpp"
#include "sessionvm/sam.hpp"
#include "sessionvm/sam_concurrent.hpp"
#include "sessionvm/typecheck.hpp"

using namespace svm;

namespace {

enum Exit { kPass = 0, kCheckFail = 1, kDiffFail = 2, kInternal = 3 };

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses a program file; prints diagnostics and returns nullopt on failure.
std::optional<Process> load(const std::string& path, bool runtime = false) {
  std::string text = slurp(path);
  ParseOptions po;
  po.allowRuntimeSyntax = runtime;
  auto r = parse({text, path}, po);
  for (const auto& d : r.diagnostics) std::cerr << d.render(path, text) << "\n";
  return r.process;
}

std::uint64_t defaultSeed() {
  if (const char* s = std::getenv("SESSIONVM_SEED")) {
    try {
      return std::stoull(s);
    } catch (...) {
      std::cerr << "ignoring malformed SESSIONVM_SEED\n";
    }
  }
  return 1;
}

void writeTo(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << data;
}

std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmdCheck(const std::string& file, const std::string& report) {
  auto p = load(file);
  if (!p) return kCheckFail;
  TypeReport r = check(*p);
  if (report == "json") {
    std::cout << r.json() << "\n";
  } else if (r.accept) {
    std::cout << "Accept\n";
  } else {
    std::cout << "Reject: " << toString(r.error->kind) << " " << r.error->rule << " at " << r.error->path << ": "
              << r.error->message << "\n";
  }
  return r.accept ? kPass : kCheckFail;
}

struct RunArgs {
  std::string file, engine = "sam", strategy = "first", trace, snapshots = "hash", checks;
  std::uint64_t seed = 0;
  std::size_t exhaustive = 0;
};

int cmdRun(const RunArgs& a) {
  auto p = load(a.file);
  if (!p) return kCheckFail;
  if (!typechecks(*p)) {
    std::cerr << "program does not typecheck (see `sessionvm check`)\n";
    return kCheckFail;
  }
  bool full = a.snapshots == "full";
  int code = kPass;
  if (a.engine == "cll") {
    auto s = Strategy::parse(a.strategy);
    if (!s) throw CLI::ValidationError("--strategy", "expected first, random(N) or all");
    if (s->kind == Strategy::Kind::All) {
      CllExploration ex = exploreCll(*p);
      std::cout << "states " << ex.states << (ex.exhausted ? "" : " (bound hit)") << "\n";
      for (const auto& nf : ex.normalForms) std::cout << "normal form " << nf << "\n";
      for (auto d : ex.digests) std::cout << "digest " << hashHex(d) << "\n";
    } else {
      CllRun run = runCll(*p, *s);
      for (const auto& st : run.steps) std::cout << toString(st.redex.rule) << " " << st.redex.path() << "\n";
      std::cout << "final " << prettyPrint(run.final) << "\n";
      std::cout << "digest " << hashHex(run.events.digest()) << "\n";
      if (run.outcome != CllRun::Outcome::Normal) code = kInternal;
    }
  } else if (a.engine == "cllb") {
    auto s = Strategy::parse(a.strategy);
    if (!s || s->kind == Strategy::Kind::All) throw CLI::ValidationError("--strategy", "expected first or random(N)");
    BRun run = runB(embedNet(*p), *s);
    for (const auto& st : run.steps) std::cout << toString(st.rule) << " " << toString(st.cls) << "\n";
    std::cout << "final " << prettyPrint(unflatten(run.states.back())) << "\n";
    std::cout << "digest " << hashHex(run.events.digest()) << "\n";
    if (run.outcome != BRun::Outcome::Normal) code = kInternal;
  } else if (a.engine == "sam") {
    SamOptions so;
    so.keepStates = full;
    SamRun run = runSam(*p, so);
    if (!a.trace.empty()) writeTo(a.trace, traceJsonl(run, full));
    for (const auto& r : run.rules) std::cout << r << "\n";
    std::cout << "outcome " << toString(run.outcome) << (run.error.empty() ? "" : ": " + run.error) << "\n";
    std::cout << "digest " << hashHex(run.events.digest()) << "\n";
    if (run.outcome != SamRun::Outcome::Halted) code = kInternal;
  } else if (a.engine == "sam-par") {
    if (a.exhaustive > 0) {
      Exploration ex = exploreConcurrent(*p, a.exhaustive);
      std::cout << "states " << ex.states << (ex.complete ? "" : " (bound hit)") << " halted " << ex.halted
                << " all-blocked " << ex.allBlocked << " stuck " << ex.stuck << " leaks " << ex.leaks << "\n";
      for (auto d : ex.digests) std::cout << "digest " << hashHex(d) << "\n";
      if (ex.stuck || ex.allBlocked || ex.leaks || ex.digests.size() > 1) code = kInternal;
    } else {
      ParOptions po;
      po.keepStates = false;
      po.checkFootprint = true;
      ParRun run = runConcurrent(*p, Scheduler::randomSeeded(a.seed), po);
      if (!a.trace.empty()) writeTo(a.trace, traceJsonl(run));
      for (const auto& st : run.steps) std::cout << "t" << st.thread << " " << st.rule << "\n";
      std::cout << "outcome " << toString(run.outcome) << (run.error.empty() ? "" : ": " + run.error) << "\n";
      std::cout << "digest " << hashHex(run.digest) << "\n";
      if (run.outcome != ParRun::Outcome::Halted || run.heapLeak) code = kInternal;
    }
  } else {
    throw CLI::ValidationError("--engine", "expected cll, cllb, sam or sam-par");
  }
  if (!a.checks.empty()) {
    DiffOptions o;
    o.correspondence = false;
    o.simulation = false;
    DiffReport r = diff(*p, o);
    for (const auto& c : splitList(a.checks)) {
      std::string name = c == "ready" ? "readiness" : c == "sound" ? "soundness" : c == "types" ? "preservation" : c;
      const CheckResult* res = r.find(name);
      if (!res) throw CLI::ValidationError("--check", "unknown check " + c);
      std::cout << "check " << c << " " << (res->pass ? "ok" : "VIOLATED: " + res->detail) << " (" << res->items
                << " states)\n";
      if (!res->pass) code = kInternal;
    }
  }
  return code;
}

int cmdTrace(const std::string& file, const std::string& snapshots, const std::string& out) {
  auto p = load(file);
  if (!p) return kCheckFail;
  if (!typechecks(*p)) return kCheckFail;
  bool full = snapshots == "full";
  SamOptions so;
  so.keepStates = full;
  SamRun run = runSam(*p, so);
  writeTo(out, traceJsonl(run, full));
  return run.outcome == SamRun::Outcome::Halted ? kPass : kInternal;
}

struct DiffArgs {
  std::string file;
  std::size_t size = 0;
  std::size_t random = 0;
  std::uint64_t seed = 0;
  bool samPar = false, serial = false, shrinkIt = true, determinism = false;
};

int cmdDiff(const DiffArgs& a) {
  DiffOptions o;
  o.samPar = a.samPar;
  o.determinism = a.determinism;
  if (!a.file.empty()) {
    auto p = load(a.file);
    if (!p) return kCheckFail;
    DiffReport r = diff(*p, o, a.file);
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(r.json());
    if (!r.pass && a.shrinkIt && r.first && !r.internal) {
      std::string chk = r.first->check;
      Process m = shrink(*p, [&](const Process& q) {
        DiffReport d = diff(q, o);
        const CheckResult* c = d.find(chk);
        return c && !c->pass;
      });
      j["minimalWitness"] = prettyPrint(m);
    }
    std::cout << j.dump(2) << "\n";
    if (r.find("typed") && !r.find("typed")->pass) return kCheckFail;
    return r.internal ? kInternal : r.pass ? kPass : kDiffFail;
  }
  Corpus c = generate(a.size, a.seed, a.random);
  SweepSummary s = sweep(c, o, !a.serial);
  nlohmann::ordered_json j;
  j["programs"] = s.programs;
  j["passed"] = s.passed;
  j["seconds"] = s.seconds;
  nlohmann::ordered_json items = nlohmann::ordered_json::object(), failed = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s.items) items[k] = v;
  for (const auto& [k, v] : s.failedChecks) failed[k] = v;
  j["items"] = items;
  j["failedChecks"] = failed;
  auto fs = nlohmann::ordered_json::array();
  for (const auto& r : s.failures) fs.push_back(nlohmann::ordered_json::parse(r.json()));
  j["failures"] = fs;
  std::cout << j.dump(2) << "\n";
  bool internal = false;
  for (const auto& r : s.failures) internal = internal || r.internal;
  return internal ? kInternal : s.failures.empty() ? kPass : kDiffFail;
}

int cmdGen(std::size_t size, std::uint64_t seed, std::size_t random, std::size_t pcut) {
  Corpus c = pcut > 0 ? pcutCorpus(seed, pcut) : generate(size, seed, random);
  for (const auto& e : c) std::cout << e.id << "\t" << prettyPrint(e.program) << "\n";
  return kPass;
}

int cmdGolden(const std::string& programs, const std::string& golden, bool update) {
  int code = kPass;
  for (const auto& e : std::filesystem::directory_iterator(programs)) {
    if (e.path().extension() != ".cll") continue;
    std::filesystem::path g = std::filesystem::path(golden) / (e.path().stem().string() + ".jsonl");
    if (!update && !std::filesystem::exists(g)) continue;
    auto p = load(e.path().string());
    if (!p) return kCheckFail;
    SamOptions so;
    so.keepStates = true;
    std::string trace = traceJsonl(runSam(*p, so), true);
    if (update) {
      writeTo(g.string(), trace);
      std::cout << "wrote " << g.string() << "\n";
    } else if (slurp(g.string()) != trace) {
      std::cout << "MISMATCH " << g.string() << "\n";
      code = kDiffFail;
    } else {
      std::cout << "ok " << g.string() << "\n";
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sessionvm: session-typed process engines and their cross-checks"};
  app.require_subcommand(1);

  std::string file, report = "text";
  auto* check = app.add_subcommand("check", "typecheck a program");
  check->add_option("file", file, "program (- for stdin)")->required();
  check->add_option("--report", report, "text or json")->check(CLI::IsMember({"text", "json"}));

  RunArgs ra;
  ra.seed = defaultSeed();
  auto* run = app.add_subcommand("run", "run a program on one engine");
  run->add_option("file", ra.file)->required();
  run->add_option("--engine", ra.engine)->check(CLI::IsMember({"cll", "cllb", "sam", "sam-par"}));
  run->add_option("--strategy", ra.strategy, "first, random(N) or all (cll only)");
  run->add_option("--trace", ra.trace, "write a JSONL trace (sam, sam-par)");
  run->add_option("--snapshots", ra.snapshots)->check(CLI::IsMember({"full", "hash"}));
  run->add_option("--check", ra.checks, "comma list of ready,sound,types");
  run->add_option("--seed", ra.seed, "scheduler seed for sam-par (default SESSIONVM_SEED or 1)");
  run->add_option("--exhaustive", ra.exhaustive, "sam-par: explore every interleaving up to N states");

  std::string tSnap = "hash", tOut;
  auto* trace = app.add_subcommand("trace", "print the SAM trace as JSONL");
  trace->add_option("file", file)->required();
  trace->add_option("--snapshots", tSnap)->check(CLI::IsMember({"full", "hash"}));
  trace->add_option("-o,--output", tOut);

  DiffArgs da;
  da.seed = defaultSeed();
  bool noShrink = false;
  auto* dif = app.add_subcommand("diff", "cross-check engines on a program or a generated corpus");
  dif->add_option("file", da.file);
  dif->add_option("--size", da.size, "sweep the enumerated corpus up to this size");
  dif->add_option("--random", da.random, "add this many seeded random programs");
  dif->add_option("--seed", da.seed);
  dif->add_flag("--sam-par", da.samPar, "include the concurrent machine");
  dif->add_flag("--determinism", da.determinism, "repeat SAM runs five times");
  dif->add_flag("--serial", da.serial, "disable the parallel sweep");
  dif->add_flag("--no-shrink", noShrink);

  std::size_t gSize = 3, gRandom = 0, gPcut = 0;
  std::uint64_t gSeed = defaultSeed();
  auto* gen = app.add_subcommand("gen", "print a generated corpus");
  gen->add_option("--size", gSize);
  gen->add_option("--random", gRandom);
  gen->add_option("--pcut", gPcut, "print this many pcut programs instead");
  gen->add_option("--seed", gSeed);

  std::string gProgs = "tests/programs", gDir = "tests/golden";
  bool gUpdate = false;
  auto* golden = app.add_subcommand("golden", "compare or rewrite golden SAM traces");
  golden->add_option("--programs", gProgs);
  golden->add_option("--dir", gDir);
  golden->add_flag("--update", gUpdate);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*check) return cmdCheck(file, report);
    if (*run) return cmdRun(ra);
    if (*trace) return cmdTrace(file, tSnap, tOut);
    if (*dif) {
      da.shrinkIt = !noShrink;
      if (da.file.empty() && da.size == 0 && da.random == 0) throw CLI::ValidationError("diff", "give a file or --size/--random");
      return cmdDiff(da);
    }
    if (*gen) return cmdGen(gSize, gSeed, gRandom, gPcut);
    if (*golden) return cmdGolden(gProgs, gDir, gUpdate);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kPass;
}
