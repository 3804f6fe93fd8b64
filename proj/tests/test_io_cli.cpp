#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "mgsp/cli.hpp"
#include "mgsp/error.hpp"
#include "mgsp/io.hpp"
#include "support.hpp"

using namespace mgsp;
using testing::Gen;
using testing::max_abs;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch()
    {
        static int counter = 0;
        dir = fs::temp_directory_path() / ("mgsp_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream(path) << text;
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "mgsp");
    std::vector<const char*> argv;
    for (const auto& s : args) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string x4_file(const Scratch& tmp)
{
    const std::string path = tmp / "x4.json";
    io::write_network(path, testing::x4());
    return path;
}

} // namespace

// --- io -------------------------------------------------------------------------

TEST_CASE("network JSON round trip")
{
    Scratch tmp;
    Gen gen(71);
    for (int trial = 0; trial < 5; ++trial) {
        const MultilayerNetwork net = gen.network(gen.integer(1, 3), gen.integer(1, 5));
        io::write_network(tmp / "n.json", net);
        const MultilayerNetwork back = io::read_network(tmp / "n.json");
        CHECK(back.adjacency() == net.adjacency());
        CHECK(back.directed() == net.directed());
    }
    const MultilayerNetwork cyc = gen_cyclic(5);
    CHECK(io::network_from_json(io::network_to_json(cyc), "mem").adjacency() == cyc.adjacency());
}

TEST_CASE("network JSON validation")
{
    using io::json;
    CHECK_THROWS_AS(io::network_from_json(json{{"M", 1}, {"N", 2}, {"directed", false}}, "x"), std::exception);
    const json bad_index{{"M", 1}, {"N", 2}, {"directed", false}, {"edges", {{{"a", 0}, {"i", 5}, {"b", 0}, {"j", 0}, {"w", 1.0}}}}};
    CHECK_THROWS_AS(io::network_from_json(bad_index, "x"), ValidationError);
    const json self_loop{{"M", 1}, {"N", 2}, {"directed", true}, {"edges", {{{"a", 0}, {"i", 1}, {"b", 0}, {"j", 1}, {"w", 1.0}}}}};
    CHECK_NOTHROW(io::network_from_json(self_loop, "x"));
}

TEST_CASE("matrix CSV round trip is exact")
{
    Scratch tmp;
    Gen gen(72);
    const Eigen::MatrixXd m = gen.matrix(4, 3) * 1e3;
    io::write_matrix_csv(tmp / "m.csv", m);
    CHECK(io::read_matrix_csv(tmp / "m.csv") == m);
    CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("CSV errors carry the line number")
{
    Scratch tmp;
    write_text(tmp / "bad.csv", "# comment\n1,2\n\n3,x\n");
    try {
        io::read_matrix_csv(tmp / "bad.csv");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("bad.csv:4:") != std::string::npos);
    }
    write_text(tmp / "ragged.csv", "1,2\n3\n");
    CHECK_THROWS_AS(io::read_matrix_csv(tmp / "ragged.csv"), ValidationError);
    write_text(tmp / "s.csv", "1,2,3\n");
    CHECK_THROWS_AS(io::read_signal(tmp / "s.csv", 2, 3), ValidationError);
    CHECK_THROWS_AS(io::read_matrix_csv(tmp / "missing.csv"), ValidationError);
}

TEST_CASE("labels and frames")
{
    Scratch tmp;
    write_text(tmp / "l.csv", "0,1\n2,-1\n");
    CHECK(io::read_labels(tmp / "l.csv", 3) == Eigen::Vector3d(1, 0, -1));
    write_text(tmp / "bad.csv", "0,2\n");
    CHECK_THROWS_AS(io::read_labels(tmp / "bad.csv", 3), ValidationError);
    write_text(tmp / "f.csv", "7,1,2,3\n3,0,0,1\n");
    const Frame f = io::read_frame(tmp / "f.csv");
    REQUIRE(f.size() == 2);
    CHECK(f[0].label == 7);
    CHECK(f[1].z == 1.0);
}

TEST_CASE("malformed JSON reports the byte offset")
{
    Scratch tmp;
    write_text(tmp / "x.json", "{\"M\": 1,,}");
    try {
        io::read_json(tmp / "x.json");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("filter spec round trip")
{
    io::FilterSpec poly;
    poly.poly = {{1.0, -0.5, 0.25}, TensorKind::Laplacian};
    poly.tensor = TensorKind::Laplacian;
    const io::FilterSpec back = io::filter_from_json(io::filter_to_json(poly), "mem");
    CHECK(back.polynomial);
    CHECK(back.tensor == TensorKind::Laplacian);
    CHECK(back.poly.coefficients == poly.poly.coefficients);

    io::FilterSpec mask;
    mask.polynomial = false;
    mask.mask = {Eigen::Vector2d(1, 0), Eigen::Vector3d(0, 1, 1), BasisSource::OrderWise};
    const io::FilterSpec m2 = io::filter_from_json(io::filter_to_json(mask), "mem");
    CHECK(!m2.polynomial);
    CHECK(m2.mask.layer == mask.mask.layer);
    CHECK(m2.mask.entity == mask.mask.entity);
    CHECK(m2.mask.source == BasisSource::OrderWise);
}

TEST_CASE("atomic writes replace the whole file")
{
    Scratch tmp;
    io::atomic_write(tmp / "a.txt", "first version, longer");
    io::atomic_write(tmp / "a.txt", "second");
    CHECK(read_text(tmp / "a.txt") == "second");
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(tmp.dir)) files += entry.is_regular_file();
    CHECK(files == 1);
}

// --- cli ------------------------------------------------------------------------

TEST_CASE("cli shift on x4")
{
    Scratch tmp;
    const std::string net = x4_file(tmp);
    write_text(tmp / "s.csv", "0,2\n2,0\n");
    const Run r = cli({"shift", "--network", net, "--signal", tmp / "s.csv", "-o", tmp / "out.csv"});
    REQUIRE(r.code == 0);
    Eigen::Matrix2d expected;
    expected << 4, 0, 0, 4;
    CHECK(max_abs(io::read_matrix_csv(tmp / "out.csv") - expected) == 0.0);

    const io::json manifest = io::read_json(tmp / "out.csv.manifest.json");
    CHECK(manifest["subcommand"] == "shift");
    CHECK(manifest["version"] == io::kVersion);
    CHECK(manifest["seed"] == 1);
    CHECK(manifest["inputs"].size() == 2);
    CHECK(manifest["outputs"][0] == tmp / "out.csv");
}

TEST_CASE("cli gen, spectrum and round-trip transforms")
{
    Scratch tmp;
    REQUIRE(cli({"gen", "--er", "0.5", "0.3", "2", "4", "--seed", "9", "-o", tmp / "er.json"}).code == 0);
    CHECK(io::read_network(tmp / "er.json").adjacency() == gen_er_multiplex(0.5, 0.3, 2, 4, 9).adjacency());

    REQUIRE(cli({"spectrum", "--network", tmp / "er.json", "--hosvd", "-o", tmp / "h.json"}).code == 0);
    CHECK(io::read_json(tmp / "h.json")["residual"].get<double>() < 1e-10);
    REQUIRE(cli({"spectrum", "--network", tmp / "er.json", "--joint", "--laplacian", "-o", tmp / "j.json"}).code == 0);
    CHECK(io::read_json(tmp / "j.json")["residual"].get<double>() < 1e-10);

    Gen gen(73);
    io::write_matrix_csv(tmp / "s.csv", gen.matrix(2, 4));
    for (const std::vector<std::string>& extra : {std::vector<std::string>{"--transform", "joint"},
                                                 {"--transform", "singular"},
                                                 {"--transform", "layer", "--basis", "cp"},
                                                 {"--transform", "entity", "--basis", "hosvd"}}) {
        std::vector<std::string> fwd{"gft", "--network", tmp / "er.json", "--signal", tmp / "s.csv", "-o", tmp / "c.csv"};
        std::vector<std::string> inv{"igft", "--network", tmp / "er.json", "--coeffs", tmp / "c.csv", "-o", tmp / "b.csv"};
        fwd.insert(fwd.end(), extra.begin(), extra.end());
        inv.insert(inv.end(), extra.begin(), extra.end());
        REQUIRE(cli(fwd).code == 0);
        REQUIRE(cli(inv).code == 0);
        CHECK(max_abs(io::read_matrix_csv(tmp / "b.csv") - io::read_matrix_csv(tmp / "s.csv")) < 1e-10);
    }
}

TEST_CASE("cli directed transform round trip")
{
    Scratch tmp;
    REQUIRE(cli({"gen", "--cyclic", "6", "-o", tmp / "c6.json"}).code == 0);
    write_text(tmp / "s.csv", "1,2,3,4,5,6\n");
    REQUIRE(cli({"gft", "--network", tmp / "c6.json", "--signal", tmp / "s.csv", "-o", tmp / "c.csv"}).code == 0);
    CHECK(io::read_matrix_csv(tmp / "c.csv").cols() == 2);
    REQUIRE(cli({"igft", "--network", tmp / "c6.json", "--coeffs", tmp / "c.csv", "-o", tmp / "b.csv"}).code == 0);
    CHECK(max_abs(io::read_matrix_csv(tmp / "b.csv") - io::read_matrix_csv(tmp / "s.csv")) < 1e-10);
    CHECK(max_abs(io::read_matrix_csv(tmp / "b.csv.imag.csv")) < 1e-10);
}

TEST_CASE("cli tv table on the x4 Laplacian")
{
    Scratch tmp;
    REQUIRE(cli({"tv", "--network", x4_file(tmp), "--laplacian", "-o", tmp / "tv.csv"}).code == 0);
    const std::string text = read_text(tmp / "tv.csv");
    CHECK(text.rfind("index,value,tv,rank\n", 0) == 0);
    long index = -1, rank = -1;
    double value = 1.0, tv = 0.0;
    REQUIRE(std::sscanf(text.c_str() + text.find('\n') + 1, "%ld,%lf,%lf,%ld", &index, &value, &tv, &rank) == 4);
    CHECK(index == 0);
    CHECK(std::abs(value) < 1e-12);
    CHECK(tv == doctest::Approx(2.0));
    CHECK(rank == 0);
}

TEST_CASE("cli filter, cluster, classify, stmgst and proptest")
{
    Scratch tmp;
    const std::string net = x4_file(tmp);
    write_text(tmp / "s.csv", "1,0\n0,1\n");
    REQUIRE(cli({"filter", "poly", "--network", net, "--signal", tmp / "s.csv", "--coeffs", "0", "0", "1", "-o",
                 tmp / "f.csv"})
                .code == 0);
    CHECK(max_abs(io::read_matrix_csv(tmp / "f.csv") - Eigen::Matrix2d{{4, 0}, {0, 4}}) < 1e-12);
    CHECK(fs::exists(tmp / "f.csv.filter.json"));
    REQUIRE(cli({"filter", "--spec", tmp / "f.csv.filter.json", "--network", net, "--signal", tmp / "s.csv", "-o",
                 tmp / "g.csv"})
                .code == 0);
    CHECK(read_text(tmp / "g.csv") == read_text(tmp / "f.csv"));

    Gen gen(74);
    Eigen::MatrixXd feats(8, 2);
    for (Index e = 0; e < 8; ++e) feats.row(e) << (e < 4 ? 0.0 : 10.0) + 0.01 * gen.uniform(), 0.01 * gen.uniform();
    io::write_matrix_csv(tmp / "l1.csv", feats);
    io::write_matrix_csv(tmp / "l2.csv", feats);
    REQUIRE(cli({"cluster", "--features", tmp / "l1.csv", tmp / "l2.csv", "--tau", "1", "-o", tmp / "cl.csv"}).code ==
            0);
    CHECK(io::read_json(tmp / "cl.csv.manifest.json")["parameters"]["k_used"] == 2);

    Eigen::MatrixXd cf(8, 3);
    for (Index e = 0; e < 8; ++e)
        for (Index r = 0; r < 3; ++r) cf(e, r) = (e % 2 ? -2.0 : 2.0) + 0.1 * gen.uniform();
    io::write_matrix_csv(tmp / "cf.csv", cf);
    write_text(tmp / "labels.csv", "0,1\n1,-1\n");
    for (const char* kind : {"af", "apf"})
        CHECK(cli({"classify", "--features", tmp / "cf.csv", "--labels", tmp / "labels.csv", "--kind", kind, "-o",
                   tmp / "cls.csv"})
                  .code == 0);

    std::vector<std::string> args{"stmgst", "--window", "2", "--tau", "10", "-o", tmp / "st.csv", "--frames"};
    for (int k = 0; k < 4; ++k) {
        const std::string p = tmp / ("fr" + std::to_string(k) + ".csv");
        write_text(p, "1,0,0,1\n2,1,0,0\n");
        args.push_back(p);
    }
    REQUIRE(cli(args).code == 0);
    CHECK(io::read_matrix_csv(tmp / "st.csv").rows() == 2);
    CHECK(fs::exists(tmp / "st.csv.index.json"));

    const Run prop = cli({"proptest", "--er", "0.4", "0.4", "2", "3", "--laplacian", "-o", tmp / "p.json"});
    CHECK(prop.code == 0);
    CHECK(prop.out.find("PASS eigen-equation") != std::string::npos);
}

TEST_CASE("cli exit codes and no partial outputs")
{
    Scratch tmp;
    const std::string net = x4_file(tmp);

    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({}).code == 2);
    CHECK(cli({"shift", "--network", net, "-o", tmp / "o.csv"}).code == 2);
    CHECK(cli({"spectrum", "--network", net, "--joint", "--hosvd", "-o", tmp / "o.json"}).code == 2);

    write_text(tmp / "bad.csv", "1,2\nx,0\n");
    const Run bad = cli({"shift", "--network", net, "--signal", tmp / "bad.csv", "-o", tmp / "o.csv"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("bad.csv:2:") != std::string::npos);

    write_text(tmp / "broken.json", "{\"M\": 2");
    CHECK(cli({"flatten", "--network", tmp / "broken.json", "-o", tmp / "o.csv"}).code == 2);

    // A nilpotent directed network has no eigenbasis.
    const std::vector<Edge> edges{{0, 1, 0, 0, 1.0}};
    io::write_network(tmp / "nil.json", build_from_edges(1, 2, true, edges));
    const Run numeric = cli({"spectrum", "--network", tmp / "nil.json", "--joint", "-o", tmp / "o.json"});
    CHECK(numeric.code == 1);

    CHECK(!fs::exists(tmp / "o.csv"));
    CHECK(!fs::exists(tmp / "o.json"));
    CHECK(!fs::exists(tmp / "o.csv.manifest.json"));
}
