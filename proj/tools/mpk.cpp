// mpk: meta-package workbench front-end.
//
// Exit codes: 0 success, 1 failed checks, 2 parse/usage errors,
// 3 unmappable type during generation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpk/check.hpp"
#include "mpk/codegen.hpp"
#include "mpk/errors.hpp"
#include "mpk/snapshot.hpp"
#include "mpk/syntax.hpp"
#include "mpk/tool.hpp"

namespace {

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) mpk::fail("IoError", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<mpk::ElementId> parseFiles(mpk::Store& store, const std::vector<std::string>& files) {
  const mpk::SyntaxRegistry registry = mpk::SyntaxRegistry::standard();
  std::vector<mpk::ElementId> pkgs;
  for (const std::string& f : files) pkgs.push_back(registry.parse(store, readFile(f)));
  return pkgs;
}

int runCheck(const std::vector<std::string>& files, const std::string& format) {
  mpk::Store store = mpk::Store::bootstrap();
  std::vector<mpk::ElementId> pkgs;
  try {
    pkgs = parseFiles(store, files);
  } catch (const mpk::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  bool ok = true;
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (mpk::ElementId p : pkgs) {
    mpk::CheckReport report = mpk::checkContainer(store, p);
    ok = ok && report.passed();
    if (format == "json") reports.push_back(report.toJson());
    else report.printText(std::cout);
  }
  if (format == "json") std::cout << reports.dump(2) << "\n";
  return ok ? 0 : 1;
}

int runGen(const std::vector<std::string>& files, const std::string& outDir, bool strict) {
  mpk::Store store = mpk::Store::bootstrap();
  std::vector<mpk::ElementId> pkgs;
  try {
    pkgs = parseFiles(store, files);
  } catch (const mpk::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (strict) {
    for (mpk::ElementId p : pkgs) {
      mpk::CheckReport report = mpk::checkContainer(store, p);
      if (!report.passed()) {
        report.printText(std::cerr);
        return 1;
      }
    }
  }
  std::filesystem::create_directories(outDir);
  nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
  try {
    for (mpk::ElementId p : pkgs)
      for (const auto& entry : mpk::generatePackage(store, p, outDir)) manifest.push_back(entry);
  } catch (const mpk::Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == "UnmappableType" ? 3 : 2;
  }
  std::ofstream out(outDir + "/manifest.json");
  out << manifest.dump(2) << "\n";
  std::cout << manifest.dump(2) << "\n";
  return 0;
}

int runPalette(const std::string& file) {
  mpk::Store store = mpk::Store::bootstrap();
  try {
    mpk::ElementId pkg = parseFiles(store, {file}).front();
    mpk::tool::Tool tool(store, pkg);
    std::cout << tool.paletteJson().dump(2) << "\n";
  } catch (const mpk::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}

int runSimulate(const std::string& file, const std::string& script, bool assertSync) {
  mpk::Store store = mpk::Store::bootstrap();
  try {
    mpk::ElementId pkg = parseFiles(store, {file}).front();
    mpk::tool::Tool tool(store, pkg);
    std::ifstream in(script);
    if (!in) mpk::fail("IoError", "cannot read " + script);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
      ++lineNo;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      mpk::tool::applyScriptEvent(store, tool, nlohmann::json::parse(line));
      if (assertSync) {
        const auto violations = tool.syncCheck();
        if (!violations.empty()) {
          std::cerr << "sync violated after line " << lineNo << ":\n"
                    << mpk::tool::violationsJson(violations).dump(2) << "\n";
          return 1;
        }
      }
    }
    const auto violations = tool.syncCheck();
    nlohmann::ordered_json out{{"diagram", tool.dumpDiagram()},
                               {"violations", mpk::tool::violationsJson(violations)}};
    std::cout << out.dump(2) << "\n";
    return violations.empty() ? 0 : 1;
  } catch (const mpk::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return 2;
  }
}

int runSelfcheck() {
  bool ok = true;
  auto report = [&ok](const std::string& name, bool pass, const std::string& detail = "") {
    ok = ok && pass;
    std::cout << (pass ? "ok   " : "FAIL ") << name;
    if (!pass && !detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
  };
  using namespace mpk;
  Store store = Store::bootstrap();

  report("meta-circularity", store.of(builtin::Class) == builtin::Class);
  report("package-is-a-class", store.isKindOf(builtin::Package, builtin::Class));
  report("xcore-is-a-meta-package", store.isMetaPackage(builtin::XCore));
  report("beans-is-a-meta-package", store.isMetaPackage(builtin::Beans));
  report("everything-is-an-element", [&] {
    for (const auto& [id, e] : store.elements())
      if (!store.exists(e.of)) return false;
    return true;
  }());
  report("slot-discipline", [&] {
    // Every populated slot must be declared by an attribute of the class.
    for (const auto& [id, e] : store.elements())
      for (const auto& [slot, v] : e.slots)
        if (store.findAttribute(e.of, slot) == kNoElement) return false;
    return true;
  }());
  report("bootstrap-well-formed", [&] {
    for (const auto& [id, e] : store.elements())
      if (!checkElement(store, id).passed()) return false;
    return true;
  }());
  report("snapshot-round-trip", [&] {
    Store reload = storeFromJson(storeToJson(store));
    return storeToJson(reload) == storeToJson(store);
  }());
  report("enum-constraint-rejects", [&] {
    // An element claiming to be an enum member without membership must fail.
    Store s = Store::bootstrap();
    ElementId colour = s.newInstance(builtin::Enum);
    s.setSlot(colour, "name", Value::str("Colour"));
    ElementId red = s.newInstance(colour);
    s.setSlot(colour, "elements", Value::set({Value::ref(red)}));
    if (!checkElement(s, red).passed()) return false;    // proper member
    if (!checkElement(s, colour).passed()) return false;
    ElementId stray = s.newInstance(builtin::Class);
    s.setSlot(colour, "elements", Value::set({Value::ref(red), Value::ref(stray)}));
    if (checkElement(s, colour).passed()) return false;  // foreign member
    s.setSlot(colour, "elements", Value::emptySet());
    return !checkElement(s, red).passed();  // orphaned member
  }());
  report("language-membership", [&] {
    // modellingElements is the sub-language of classes; the wide reading
    // adds the package/attribute forms the palette offers.
    auto narrow = store.modellingElements(builtin::XCore);
    auto wide = store.wideModellingElements(builtin::XCore);
    for (ElementId e : wide)
      if (std::find(narrow.begin(), narrow.end(), e) == narrow.end()) return false;
    return !wide.empty() && wide.size() < narrow.size();
  }());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meta-package workbench: parse, check, generate, simulate"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string format = "text";
  auto* check = app.add_subcommand("check", "parse models and run well-formedness checks");
  check->add_option("files", files, "model files (.mpk)")->required()->expected(-1);
  check->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::vector<std::string> genFiles;
  std::string outDir;
  bool strict = false;
  auto* gen = app.add_subcommand("gen", "generate Java entity beans");
  gen->add_option("files", genFiles, "model files (.mpk)")->required()->expected(-1);
  gen->add_option("--out", outDir, "output directory")->required();
  gen->add_flag("--strict", strict, "refuse to generate from ill-formed models");

  std::string paletteFile;
  auto* palette = app.add_subcommand("palette", "print the tool palette for a model");
  palette->add_option("file", paletteFile, "model file (.mpk)")->required();

  std::string simFile, simScript;
  bool assertSync = false;
  auto* simulate = app.add_subcommand("simulate", "replay a diagram event script");
  simulate->add_option("file", simFile, "model file (.mpk)")->required();
  simulate->add_option("script", simScript, "event script (JSON lines)")->required();
  simulate->add_flag("--assert-sync", assertSync, "check model/diagram sync after every event");

  auto* selfcheck = app.add_subcommand("selfcheck", "verify the bootstrapped kernel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (check->parsed()) return runCheck(files, format);
  if (gen->parsed()) return runGen(genFiles, outDir, strict);
  if (palette->parsed()) return runPalette(paletteFile);
  if (simulate->parsed()) return runSimulate(simFile, simScript, assertSync);
  if (selfcheck->parsed()) return runSelfcheck();
  return 2;
}
