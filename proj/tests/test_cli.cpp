#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kCli = RISOP_CLI_PATH;

struct RunResult {
    int code = -1;
    std::string out;
};

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "risop_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args) {
    fs::path out = work_dir() / "stdout.txt";
    std::string cmd = kCli + " " + args + " > " + out.string() + " 2> " +
                      (work_dir() / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) fields.push_back(tok);
        rows.push_back(fields);
    }
    return rows;
}

} // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("sweep --axis snr_db --steps 1").code == 2);
    CHECK(run("no-such-command").code == 2);
    CHECK(run("outage --methods bogus").code == 2);
    CHECK(run("outage --methods surrogate").code == 2); // needs --model
}

TEST_CASE("io errors exit with code 4") {
    CHECK(run("train --dataset /nonexistent/ds.csv").code == 4);
    CHECK(run("predict --model /nonexistent/model.json --input 0,10,1,1,1,1,4").code == 4);
}

TEST_CASE("precision failures exit with code 3") {
    // gamma-closed at N=400 pushes the cylinder order past the guard
    CHECK(run("outage --n 400 --methods gamma-closed").code == 3);
}

TEST_CASE("outage: exact and mc agree within the reported interval" * doctest::timeout(300)) {
    fs::path csv = work_dir() / "outage.csv";
    RunResult r = run("outage --n 4 --snr-db 12 --inr-db 0 --gamma-th-db 0 "
                      "--methods exact,mc --mc-samples 200000 --seed 5 -o " +
                      csv.string());
    REQUIRE(r.code == 0);
    auto rows = read_csv(csv);
    REQUIRE(rows.size() == 3); // header + 2 methods
    CHECK(rows[0] == std::vector<std::string>{"method", "p_out", "err"});
    double exact = std::stod(rows[1][1]);
    double mc = std::stod(rows[2][1]);
    double half = std::stod(rows[2][2]);
    CHECK(std::abs(exact - mc) <= half);
}

TEST_CASE("seed fixes all stochastic outputs bit-identically" * doctest::timeout(300)) {
    fs::path a = work_dir() / "sweep_a.csv";
    fs::path b = work_dir() / "sweep_b.csv";
    std::string base = "sweep --axis snr_db --start 0 --stop 10 --steps 3 --n 2 "
                       "--methods mc --mc-samples 50000 --seed 9 -o ";
    REQUIRE(run(base + a.string()).code == 0);
    REQUIRE(run(base + b.string() + " --workers 3").code == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("every emitted CSV re-parses through evaluate --check" * doctest::timeout(600)) {
    fs::path pdf = work_dir() / "pdf.csv";
    REQUIRE(run("pdf-x --n 2 --methods exact,gamma_fit,mc --samples 100000 -o " +
                pdf.string()).code == 0);
    CHECK(run("evaluate --check " + pdf.string()).code == 0);

    fs::path sweep = work_dir() / "sweep.csv";
    REQUIRE(run("sweep --axis n_elements --start 1 --stop 4 --steps 3 --methods gamma-numeric "
                "-o " + sweep.string()).code == 0);
    CHECK(run("evaluate --check " + sweep.string()).code == 0);

    fs::path outage = work_dir() / "outage2.csv";
    REQUIRE(run("outage --n 2 --methods gamma-numeric,asymptotic -o " + outage.string()).code ==
            0);
    CHECK(run("evaluate --check " + outage.string()).code == 0);

    // a file with a foreign header is rejected
    fs::path bogus = work_dir() / "bogus.csv";
    std::ofstream(bogus) << "foo,bar\n1,2\n";
    CHECK(run("evaluate --check " + bogus.string()).code == 4);
}

TEST_CASE("surrogate lifecycle through the CLI" * doctest::timeout(600)) {
    fs::path ds = work_dir() / "ds.csv";
    fs::path model = work_dir() / "model.json";
    fs::path report = work_dir() / "report.csv";
    fs::path pred = work_dir() / "pred.csv";

    REQUIRE(run("dataset --count 200 --label-method gamma-numeric --seed 4 -o " +
                ds.string()).code == 0);
    CHECK(run("evaluate --check " + ds.string()).code == 0);

    REQUIRE(run("train --dataset " + ds.string() + " --max-epochs 4 --seed 2 -o " +
                model.string() + " --report " + report.string()).code == 0);
    CHECK(run("evaluate --check " + report.string()).code == 0);

    RunResult pr = run("predict --model " + model.string() + " --input 0,15,1,1,1,1,8 --json");
    REQUIRE(pr.code == 0);
    CHECK(pr.out.find("p_out") != std::string::npos);

    REQUIRE(run("predict --model " + model.string() + " --dataset " + ds.string() + " -o " +
                pred.string()).code == 0);
    CHECK(run("evaluate --check " + pred.string()).code == 0);

    RunResult ev = run("evaluate --model " + model.string() + " --dataset " + ds.string());
    CHECK(ev.code == 0);
    CHECK(ev.out.find("mse") != std::string::npos);
}

TEST_CASE("config file provides defaults, flags override" * doctest::timeout(300)) {
    fs::path cfg = work_dir() / "outage.cfg";
    std::ofstream(cfg) << "n=8\nsnr-db=12\nmethods=gamma-numeric\n";
    fs::path a = work_dir() / "cfg_a.csv";
    fs::path b = work_dir() / "cfg_b.csv";
    fs::path c = work_dir() / "cfg_c.csv";
    REQUIRE(run("outage --config " + cfg.string() + " -o " + a.string()).code == 0);
    REQUIRE(run("outage --n 8 --snr-db 12 --methods gamma-numeric -o " + b.string()).code == 0);
    CHECK(slurp(a) == slurp(b));
    // explicit flag wins over the config value
    REQUIRE(run("outage --config " + cfg.string() + " --n 4 -o " + c.string()).code == 0);
    fs::path d = work_dir() / "cfg_d.csv";
    REQUIRE(run("outage --n 4 --snr-db 12 --methods gamma-numeric -o " + d.string()).code == 0);
    CHECK(slurp(c) == slurp(d));
}

TEST_CASE("shipped reproduce configs parse and drive the pipeline" * doctest::timeout(600)) {
    fs::path outdir = work_dir() / "rep";
    // desk-scale override keeps the test quick
    RunResult r = run(std::string("reproduce fig3 --config ") + RISOP_CONFIG_DIR +
                      "/fig3.cfg --mc-samples 100000 --out-dir " + outdir.string());
    REQUIRE(r.code == 0);
    CHECK(run("evaluate --check " + (outdir / "fig3_n4.csv").string()).code == 0);
    CHECK(run("evaluate --check " + (outdir / "fig3_n16.csv").string()).code == 0);
    CHECK(run("evaluate --check " + (outdir / "fig3_n64.csv").string()).code == 0);
}
