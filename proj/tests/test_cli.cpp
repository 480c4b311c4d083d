#include "coulomb/cli.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

using coulomb::cli::run_command;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

json run_json(std::vector<std::string> args) {
    args.push_back("--json");
    const auto r = run_command(args);
    REQUIRE(r.exit_code == 0);
    return json::parse(r.output);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("every record carries the fixed keys and round-trips through JSON") {
    const std::vector<std::vector<std::string>> commands{
        {"potential", "--domain", "ball:d=3,R=1,N=1", "--point", "0,0,0"},
        {"energy", "--domain", "segment:R=1,N=2", "--points", "-0.5;0.5"},
        {"coeffs", "--axes", "1x1x2"},
        {"surface", "--axes", "2x1x1", "--quantity", "total"},
        {"green", "--geometry", "disk:R=1", "--z", "2,0", "--w", "3,0"},
        {"capacity", "--map", "interval", "--point", "2,0"},
        {"droplet", "--kind", "induced", "--alpha", "1"},
        {"fluct", "--f", "cos:k=1,a=1", "--beta", "2"},
        {"riesz", "--s", "0.5", "--n", "10", "--R", "2"},
        {"balayage", "--domain", "annulus:R=1,c=0.5,N=1", "--point", "0.1,0.1"},
        {"hole", "--domain", "ball:d=2,R=1"},
        {"sample", "--ensemble", "ginibre", "--n", "3", "--sweeps", "100", "--seed", "1", "--chains", "2"},
    };
    for (const auto& c : commands) {
        CAPTURE(c[0]);
        const auto rec = run_json(c);
        for (const char* key : {"command", "inputs", "value", "values", "method", "tolerance", "provenance"}) CHECK(rec.contains(key));
        CHECK(rec["command"] == c[0]);
        CHECK_FALSE(rec.contains("error"));
        // dump and parse back without loss
        CHECK(json::parse(rec.dump()) == rec);
    }
}

TEST_CASE("worked values through the command layer") {
    CHECK(run_json({"potential", "--domain", "ball:d=3,R=1,N=1", "--point", "0,0,0"})["value"].get<double>() ==
          doctest::Approx(-1.5).epsilon(1e-14));
    CHECK(run_json({"energy", "--domain", "segment:R=1,N=2", "--points", "-0.5;0.5"})["value"].get<double>() ==
          doctest::Approx(7.0 / 6.0).epsilon(1e-14));
    CHECK(run_json({"green", "--geometry", "disk:R=1", "--z", "2,0", "--w", "3,0"})["value"].get<double>() ==
          doctest::Approx(std::log(5.0)).epsilon(1e-14));
    const auto cap = run_json({"capacity", "--map", "interval", "--point", "2,0"});
    CHECK(cap["values"]["robin"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(run_json({"fluct", "--f", "cos:k=2,a=1", "--beta", "2"})["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(run_json({"hole", "--domain", "ball:d=2,R=1"})["value"].get<double>() == doctest::Approx(kPi * kPi / 8.0).epsilon(1e-12));
    CHECK(run_json({"coeffs", "--axes", "1x1x2"})["values"]["alpha_sum"].get<double>() == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("text output prints one key per line") {
    const auto r = run_command({"green", "--geometry", "halfplane", "--z", "0,1", "--w", "0,2"});
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("command: green\n") != std::string::npos);
    CHECK(r.output.find("value: 1.0986122886681098") != std::string::npos);
    CHECK(coulomb::cli::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("exit codes and error records") {
    const auto torus = run_command({"potential", "--domain", "torus:R=1", "--point", "0", "--json"});
    CHECK(torus.exit_code == 2);
    const auto rec = json::parse(torus.output);
    CHECK(rec["error"]["type"] == "unsupported");
    CHECK(rec["error"]["message"].get<std::string>().find("torus") != std::string::npos);

    CHECK(run_command({"potential", "--domain", "ball:d=3,R=-1,N=1", "--point", "0,0,0"}).exit_code == 2);
    CHECK(run_command({"potential", "--domain", "ball:d=3,R=1,N=1", "--point", "0,0"}).exit_code == 2);
    CHECK(run_command({"potential", "--domain", "ball:d=3,R=1,N=1,bogus=2", "--point", "0,0,0"}).exit_code == 2);
    CHECK(run_command({"green", "--geometry", "disk:R=1", "--z", "2,0", "--w", "2,0"}).exit_code == 2);
    CHECK(run_command({"nosuchcommand"}).exit_code == 2);
    CHECK(run_command({"riesz", "--s", "1.5", "--n", "3"}).exit_code == 2);
}

TEST_CASE("geometry and point parsers") {
    const auto d = coulomb::cli::parse_domain("cuboid:lo=0x0x0,hi=1x2x3,N=6");
    CHECK(coulomb::domains::volume(d.geometry) == doctest::Approx(6.0));
    CHECK(d.rho_b() == doctest::Approx(1.0));
    CHECK(coulomb::cli::parse_point("1.5, -2,3e-1") == std::vector<double>{1.5, -2.0, 0.3});
    CHECK_THROWS(coulomb::cli::parse_point("1,,2"));
    CHECK_THROWS(coulomb::cli::parse_domain("ellipse:a1=2,b=1"));
    CHECK_THROWS(coulomb::cli::parse_domain("cuboid:lo=0x0,hi=1x1x1"));
}

TEST_CASE("sampler output is reproducible byte for byte") {
    const auto dir = std::filesystem::temp_directory_path() / "coulomb_cli_test";
    std::filesystem::create_directories(dir);
    const auto a = dir / "a.csv", b = dir / "b.csv";
    for (const auto& p : {a, b}) {
        const auto r = run_command({"sample", "--ensemble", "elliptic:tau=0.3", "--n", "5", "--sweeps", "60", "--seed", "9",
                                    "--chains", "3", "--out", p.string()});
        REQUIRE(r.exit_code == 0);
    }
    const auto text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text.rfind("chain,sweep,particle,re,im\n", 0) == 0);
    // 3 chains x 48 measured sweeps x 5 particles plus the header
    CHECK(std::count(text.begin(), text.end(), '\n') == 3 * 48 * 5 + 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config files feed the sampler") {
    const auto dir = std::filesystem::temp_directory_path() / "coulomb_cli_cfg";
    std::filesystem::create_directories(dir);
    const auto cfg = dir / "run.toml";
    {
        std::ofstream out(cfg);
        out << "ensemble = \"sinh:c=1,L=6.283185307179586\"\nn = 1\nsweeps = 2000\nseed = 4\nchains = 4\n";
    }
    const auto rec = run_json({"sample", "--config", cfg.string()});
    CHECK(rec["inputs"]["n"] == 1);
    CHECK(rec["inputs"]["chains"] == 4);
    CHECK(rec["value"].get<double>() == doctest::Approx(0.5).epsilon(0.2));
    std::filesystem::remove_all(dir);
}

TEST_CASE("quick acceptance suite through the check command") {
    const auto r = run_command({"check", "--suite", "quick", "--json"});
    const auto rec = json::parse(r.output);
    CHECK(r.exit_code == (rec["values"]["failed"].get<int>() == 0 ? 0 : 1));
    CHECK(rec["values"]["passed"].get<int>() + rec["values"]["failed"].get<int>() == 11);
}

TEST_CASE("the installed binary maps failures to its exit status") {
    const char* tool = std::getenv("COULOMB_TOOL");
    if (!tool) return;
    const std::string base = std::string("\"") + tool + "\"";
    const int ok = std::system((base + " green --geometry halfplane --z 0,1 --w 0,2 > /dev/null").c_str());
    CHECK(WEXITSTATUS(ok) == 0);
    const int bad = std::system((base + " potential --domain torus:R=1 --point 0 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(bad) == 2);
}
