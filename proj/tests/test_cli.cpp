// exercises the susy binary end to end; argv[1] is the path to the tool
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
    std::cout << (ok ? "ok   " : "FAIL ") << what << '\n';
    if (!ok) ++g_failures;
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& cmd) {
    std::string full = cmd + " 2>/dev/null";
    FILE* p = popen(full.c_str(), "r");
    if (!p) return {127, ""};
    std::string out;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : 128, out};
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <susy-binary>\n";
        return 2;
    }
    const std::string susy = argv[1];
    const fs::path work = fs::temp_directory_path() / "susy_cli_test";
    fs::remove_all(work);
    fs::create_directories(work);

    // spectrum: oscillator ladder 2n+6 as JSON
    {
        RunResult r = run(susy + " spectrum --system oscillator --A -5 --max-states 4");
        check(r.exit_code == 0, "spectrum exits 0");
        auto j = nlohmann::json::parse(r.out, nullptr, false);
        check(!j.is_discarded(), "spectrum output parses as JSON");
        if (!j.is_discarded()) {
            auto& ev = j["eigenvalues"];
            check(ev.size() == 4, "spectrum reports four states");
            bool ladder = true;
            for (size_t n = 0; n < ev.size(); ++n)
                ladder = ladder &&
                         std::abs(ev[n]["epsilon"].get<double>() - (2.0 * n + 6.0)) < 1e-5;
            check(ladder, "spectrum epsilon matches 2n+6");
            check(ev[0]["node_count"] == 0, "ground state is nodeless");
        }
    }

    // transform: all five artifacts with proper CSV headers
    {
        const fs::path dir = work / "osc";
        RunResult r = run(susy + " transform --system oscillator --out-dir " + dir.string());
        check(r.exit_code == 0, "transform exits 0");
        for (const char* name :
             {"U1.csv", "q1.csv", "wronskian.csv", "spinors.csv", "report.json"})
            check(fs::exists(dir / name), std::string("transform writes ") + name);
        std::ifstream csv(dir / "U1.csv");
        std::string header;
        std::getline(csv, header);
        check(header == "x,value", "CSV header is x,value");

        std::ifstream rj(dir / "report.json");
        auto rep = nlohmann::json::parse(rj, nullptr, false);
        check(!rep.is_discarded(), "report.json parses");
        if (!rep.is_discarded()) {
            auto& ins = rep["diff"]["inserted"];
            check(ins.size() == 1 && std::abs(ins[0].get<double>() - 9.1) < 1e-4,
                  "report records the inserted level at 9.1");
            check(rep["regularity"]["wronskian_nodeless"] == true,
                  "report marks the Wronskian nodeless");
        }
    }

    // verify: default coulomb passes
    {
        RunResult r = run(susy + " verify");
        check(r.exit_code == 0, "verify exits 0 on the default config");
        auto j = nlohmann::json::parse(r.out, nullptr, false);
        check(!j.is_discarded() && j["pass"] == true, "verify report says pass");
    }

    // config file is honored and flags override it
    {
        const fs::path cfg = work / "cfg.json";
        std::ofstream(cfg) << R"({"system":{"name":"oscillator","A":-5.0},)"
                           << R"("spectrum":{"max_states":2}})";
        RunResult r = run(susy + " spectrum --config " + cfg.string());
        auto j = nlohmann::json::parse(r.out, nullptr, false);
        check(r.exit_code == 0 && !j.is_discarded() && j["eigenvalues"].size() == 2,
              "config file sets system and max_states");
        RunResult o = run(susy + " spectrum --config " + cfg.string() + " --max-states 3");
        auto jo = nlohmann::json::parse(o.out, nullptr, false);
        check(o.exit_code == 0 && !jo.is_discarded() && jo["eigenvalues"].size() == 3,
              "command-line flag overrides the config file");
    }

    // error paths
    {
        const fs::path bad = work / "bad.json";
        std::ofstream(bad) << "{not json";
        check(run(susy + " verify --config " + bad.string()).exit_code == 2,
              "malformed config exits 2");
        check(run(susy + " spectrum --system nosuch").exit_code == 2,
              "unknown system exits 2");
        check(run(susy + " spectrum --no-such-flag").exit_code == 2,
              "unknown flag exits 2");
    }

    fs::remove_all(work);
    if (g_failures) {
        std::cout << g_failures << " failure(s)\n";
        return 1;
    }
    std::cout << "all cli checks passed\n";
    return 0;
}
