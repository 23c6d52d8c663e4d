#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using ncs::cli::run;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

// Public entry points of the library, one per header declaration.
const std::vector<std::string> library_operations = {
    // partition.hpp
    "Partition::parse", "Partition::from_permutation", "Partition::blocks", "Partition::to_string",
    "Partition::block_count", "to_string(PartitionClass)", "parse_partition_class", "parse_colors",
    "colors_to_string", "parse_permutation", "permutation_to_string", "is_permutation", "enumerate",
    "is_noncrossing", "is_member", "colors_compatible", "join", "kernel", "is_constant_on_blocks", "standard_form",
    "signature", "crossing_count", "legal_switches", "apply_switch", "halfcommuting_membership", "to_permutation",
    "compose(Permutation)", "inverse(Permutation)", "identity_permutation", "permutation_sign", "all_permutations",
    // tensor.hpp
    "delta", "t_map", "xi_vector", "inner_product", "tensor_concat", "compose(Partition)", "involution", "multiply",
    "kronecker", "SparseTensorMap::transpose", "SparseTensorMap::scaled",
    // exact_matrix.hpp
    "rank(ExactMatrix)", "determinant", "inverse(ExactMatrix)", "row_sum_profile", "ExactMatrix::to_strings",
    // spec.hpp
    "group_name", "sphere_name", "parse_spec", "all_specs", "parse_regime", "regime_name",
    // weingarten.hpp
    "real_word", "category_pairings", "gram", "weingarten_matrix", "WeingartenTable", "WeingartenTable::deltas",
    "moment", "sphere_trace", "gram_rank_products",
    // relations.hpp
    "parse_word", "word_to_string", "word_kernel", "matching_permutation", "relation_sign", "word_sign",
    "parse_relation", "to_string(RelationSchema)", "describe", "sphere_relations", "group_relations",
    "monomial_system", "group_relation_sign", "span_sign_table", "comult_sign_check", "Saturation",
    "Saturation::truncated", "Saturation::stopped_early", "Saturation::fact_count", "Saturation::equivalent",
    "Saturation::representative", "Saturation::contraction", "Saturation::contraction_source",
    "Saturation::derived", "Saturation::explain", "saturate", "parse_combination", "to_string(NCCombination)",
    "normalize", "reduce", "classify_monomial_sphere", "relation_group",
    // models.hpp
    "to_matrix_model", "sample_classical_point", "twisted_classical_points", "antidiagonal_model", "pair_model",
    "clifford_twist", "free_model", "sphere_model", "sqrt_positive_model", "check_schema", "check_sphere_relations",
    "SignedPermutation::matrix", "enumerate_signed_permutations", "enumerate_phase_permutations", "dense", "kron",
    "check_intertwiner", "haar_orthogonal", "haar_unitary", "to_string(HaarGroup)", "parse_haar_group",
    "haar_moment_mc", "check_fixed_vector_identity", "transform", "coaction_check",
    // verify.hpp
    "parse_suite", "to_string(Suite)", "check_name", "run_check", "run_suite", "suite_options",
};

}  // namespace

TEST_CASE("command table lists every subcommand once") {
    const std::vector<std::string> expected = {"partitions", "signature", "gram",     "weingarten",
                                               "moment",     "trace",     "rank",     "classify",
                                               "saturate",   "reduce",    "check",    "verify"};
    std::vector<std::string> names;
    for (const auto& c : ncs::cli::command_table()) names.push_back(c.name);
    CHECK(names == expected);
}

TEST_CASE("every library operation is reachable from a subcommand") {
    std::set<std::string> reached;
    for (const auto& c : ncs::cli::command_table()) reached.insert(c.operations.begin(), c.operations.end());
    for (const auto& op : library_operations) {
        CAPTURE(op);
        CHECK(reached.count(op) == 1);
    }
    const std::set<std::string> known(library_operations.begin(), library_operations.end());
    for (const auto& op : reached) {
        CAPTURE(op);
        CHECK(known.count(op) == 1);
    }
}

TEST_CASE("each command runs its example") {
    for (const auto& c : ncs::cli::command_table()) {
        std::vector<std::string> args = {c.name};
        args.insert(args.end(), c.example.begin(), c.example.end());
        for (const char* format : {"json", "csv"}) {
            auto a = args;
            a.insert(a.end(), {"--format", format});
            const Result r = call(a);
            CAPTURE(c.name);
            CAPTURE(format);
            CAPTURE(r.err);
            CHECK(r.code == 0);
            CHECK(!r.out.empty());
            if (std::string(format) == "json") CHECK_NOTHROW((void)json::parse(r.out));
        }
    }
}

TEST_CASE("classify the reversal relation") {
    const Result r = call({"classify", "--perm", "321", "--regime", "real"});
    CHECK(r.code == 0);
    CHECK(r.out == "{\n  \"sphere\": \"real_half\"\n}\n");
    CHECK(json::parse(call({"classify", "--perm", "21", "--regime", "complex_twisted"}).out)["sphere"] ==
          "complex_classical_twisted");
    CHECK(json::parse(call({"classify", "--perm", "2413", "--regime", "real"}).out)["sphere"] == "real_classical");
}

TEST_CASE("weingarten output") {
    const Result r = call({"weingarten", "--group", "o_n", "--k", "4", "--n", "5"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    std::sort(keys.begin(), keys.end());
    CHECK(keys == std::vector<std::string>{"N", "alpha", "gram", "group", "weingarten"});
    CHECK(j["group"] == "o_n");
    CHECK(j["N"] == 5);
    // 1/(5*4*7) [[6,-1,-1],[-1,6,-1],[-1,-1,6]]
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(j["weingarten"][a][b] == (a == b ? "3/70" : "-1/140"));

    const json u = json::parse(call({"weingarten", "--group", "u_n", "--alpha", "11**", "--n", "4"}).out);
    CHECK(u["alpha"] == "11**");
    // 1/(N(N^2-1)) [[N,-1],[-1,N]] at N=4
    CHECK(u["weingarten"] == json::array({json::array({"1/15", "-1/60"}), json::array({"-1/60", "1/15"})}));
}

TEST_CASE("exit codes") {
    Result r = call({"weingarten", "--group", "o_n", "--k", "4", "--n", "5", "--bogus"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(r.out.empty());
    CHECK(call({}).code == 2);
    CHECK(call({"frobnicate"}).code == 2);
    CHECK(call({"gram", "--group", "x_n", "--k", "2", "--n", "2"}).code == 2);
    CHECK(call({"gram", "--group", "o_n", "--k", "2"}).code == 2);
    CHECK(call({"moment", "--group", "o_n", "--n", "3", "--i", "1,0", "--j", "1,1"}).code == 2);
    CHECK(call({"signature", "--partition", "ab|ba", "--format", "xml"}).code == 2);
    CHECK(call({"classify", "--perm", "3x1"}).code == 2);

    r = call({"weingarten", "--group", "o_n", "--k", "4", "--n", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("singular") != std::string::npos);
    CHECK(call({"check", "--kind", "relations", "--model", "sqrt", "--sphere", "complex_free", "--n", "2"}).code == 1);
    CHECK(call({"signature", "--partition", "ab|ba", "--tuple", "1,2"}).code == 1);

    r = call({"check", "--sphere", "real_classical", "--model", "free", "--n", "2"});
    CHECK(r.code == 3);
    CHECK(json::parse(r.out)["passed"] == false);
    CHECK(call({"check", "--kind", "intertwiner", "--partition", "ab|ba", "--group", "orthogonal", "--n", "3",
                "--regime", "real_twisted"})
              .code == 3);
    CHECK(call({"check", "--kind", "intertwiner", "--partition", "ab|ba", "--group", "h_n", "--n", "3", "--regime",
                "real_twisted"})
              .code == 0);
    CHECK(call({"saturate", "--perm", "321", "--regime", "real", "--goal", "abcd=dcba"}).code == 3);

    r = call({"gram", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--alpha") != std::string::npos);
}

TEST_CASE("output is byte-identical for identical flags") {
    const std::vector<std::vector<std::string>> cases = {
        {"moment", "--group", "unitary", "--method", "mc", "--n", "2", "--i", "1,1", "--j", "1,1", "--alpha", "1*",
         "--samples", "2000", "--seed", "7"},
        {"check", "--sphere", "all", "--n", "3", "--seed", "11"},
        {"check", "--kind", "coaction", "--sphere", "complex_half", "--model", "pair", "--n", "3", "--seed", "5"},
        {"saturate", "--sphere", "real_half_twisted", "--degree", "4"},
        {"verify", "--suite", "quick", "--check", "13"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.front());
        const Result a = call(c), b = call(c);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
    auto seeded = [](const char* seed) {
        return call({"check", "--sphere", "real_half", "--n", "3", "--seed", seed}).out;
    };
    CHECK(seeded("1") != seeded("2"));
}

TEST_CASE("exact and sampled moments agree") {
    const json e = json::parse(call({"moment", "--group", "o_n", "--n", "3", "--i", "1,1,1,1", "--j", "1,1,2,2"}).out);
    CHECK(e["moment"] == "1/15");
    const json m = json::parse(call({"moment", "--group", "o_n", "--method", "mc", "--n", "3", "--i", "1,1,1,1",
                                     "--j", "1,1,2,2", "--samples", "20000", "--seed", "3"})
                                   .out);
    CHECK(m["reference"] == "1/15");
    CHECK(m["exact"] == false);
    const double se = m["standard_error"];
    CHECK(se > 0);
    CHECK(std::abs(m["mean"][0].get<double>() - 1.0 / 15) < 4 * se);
    const json k = json::parse(
        call({"moment", "--group", "k_n", "--method", "mc", "--n", "2", "--i", "1,1", "--j", "1,1", "--alpha", "1*"})
            .out);
    CHECK(k["exact"] == true);
    CHECK(k["mean"][0] == 0.5);
}

TEST_CASE("tensor and model serialization") {
    const json t = json::parse(call({"signature", "--partition", "ab|ba", "--n", "2", "--regime", "real_twisted"}).out);
    const json& m = t["tensor"];
    CHECK(m["N"] == 2);
    CHECK(m["k"] == 2);
    CHECK(m["l"] == 2);
    REQUIRE(m["entries"].size() == 4);
    int negative = 0;
    for (const auto& e : m["entries"]) {
        CHECK(e[0][0] == e[1][1]);
        CHECK(e[0][1] == e[1][0]);
        negative += e[2] == -1;
        CHECK(e[2] == (e[1][0] == e[1][1] ? 1 : -1));
    }
    CHECK(negative == 2);
    CHECK(t["functoriality"]["involution"] == true);

    const json p = json::parse(call({"check", "--sphere", "complex_classical", "--model", "point", "--n", "3"}).out);
    const json& data = p["results"][0]["data"];
    CHECK(data["kind"] == "point");
    CHECK(data["N"] == 3);
    CHECK(data["d"] == 1);
    double norm = 0;
    for (const auto& z : data["data"]) norm += z[0].get<double>() * z[0].get<double>() + z[1].get<double>() * z[1].get<double>();
    CHECK(norm == doctest::Approx(1.0));

    const json f = json::parse(call({"check", "--sphere", "real_free", "--model", "free", "--n", "3", "--d", "4"}).out);
    const json& fd = f["results"][0]["data"];
    CHECK(fd["kind"] == "matrix");
    CHECK(fd["data"].size() == 3 * 4 * 4);
}

TEST_CASE("csv tables") {
    const Result r = call({"partitions", "--class", "NC2", "--k", "0", "--l", "6", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1 + 5);
    CHECK(r.out.rfind("literal,blocks,noncrossing,crossings\n", 0) == 0);
    const Result w = call({"weingarten", "--group", "o_n", "--k", "4", "--n", "5", "--format", "csv"});
    CHECK(w.out == "c1,c2,c3\n3/70,-1/140,-1/140\n-1/140,3/70,-1/140\n-1/140,-1/140,3/70\n");
}

TEST_CASE("rank, trace and relation group commands") {
    const json r = json::parse(call({"rank", "--n", "3"}).out);
    REQUIRE(r["ranks"].size() == 10);
    CHECK(r["ranks"][0]["sphere"] == "real_classical");
    CHECK(r["ranks"][0]["rank"] == 6);
    const json t = json::parse(call({"trace", "--sphere", "real_classical", "--n", "3", "--i", "1,1"}).out);
    CHECK(t["trace"] == "1/3");
    const json g = json::parse(call({"classify", "--sphere", "real_half", "--k", "4"}).out);
    CHECK(g["order"] == 4);
    const json o = json::parse(call({"classify", "--sphere", "real_half", "--k", "3"}).out);
    CHECK(o["elements"] == json::array({"123", "321"}));
    CHECK(call({"classify", "--group", "o_n_star", "--k", "3"}).code == 2);
    const json gs = json::parse(
        call({"check", "--kind", "group-sign", "--group", "bar_o_n", "--perm", "21", "--i", "1,1", "--j", "1,2"}).out);
    CHECK(gs["sign"] == -1);
}

TEST_CASE("saturate and reduce") {
    const Result s = call({"saturate", "--perm", "321", "--regime", "real", "--goal", "abcd=adcb", "--degree", "4"});
    REQUIRE(s.code == 0);
    const json j = json::parse(s.out);
    CHECK(j["goals"][0]["holds"] == true);
    CHECK(!j["trace"].empty());
    for (const auto& step : j["trace"]) {
        CHECK(step.contains("rule"));
        CHECK(step["premises"].is_array());
    }
    const json red = json::parse(call({"reduce", "--expr", "ab*ba*", "--sum", "b", "--sphere", "complex_half"}).out);
    CHECK(red["result"] == "aa*");
    const json z = json::parse(call({"reduce", "--expr", "abc-cba", "--sphere", "real_half_twisted"}).out);
    CHECK(z["result"] == "2abc");
    const json h = json::parse(call({"reduce", "--expr", "abc+cba", "--sphere", "real_half_twisted"}).out);
    CHECK(h["zero"] == true);
}
