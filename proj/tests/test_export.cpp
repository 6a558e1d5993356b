#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bipdb/errors.hpp"
#include "bipdb/export.hpp"
#include "bipdb/graph.hpp"
#include "bipdb/measures.hpp"
#include "build_graph.hpp"
#include "oracle.hpp"

using bipdb::convert_dump;
using bipdb::DumpEntry;
using bipdb::dump_filename;
using bipdb::DumpSpec;
using bipdb::Measure;
using bipdb::MeasureParams;
using bipdb::parse_dump_filename;
using bipdb::read_dump;
using bipdb::ScoreVector;
using bipdb::write_dump;

namespace {

MeasureParams canonical_params() {
    MeasureParams p;
    p.current_year = 2008;
    return p;
}

DumpSpec spec_for(Measure m, bool compressed = true) {
    return {m, "uni1", canonical_params(), compressed};
}

} // namespace

TEST_CASE("filenames encode the producing configuration per measure") {
    CHECK(dump_filename(spec_for(Measure::CC)) == "CC_uni1.tsv.gz");
    CHECK(dump_filename(spec_for(Measure::ICC)) == "iCC_uni1_y3.tsv.gz");
    CHECK(dump_filename(spec_for(Measure::PR)) == "PR_uni1_a0.5_error1e-12.tsv.gz");
    CHECK(dump_filename(spec_for(Measure::RAM)) == "RAM_uni1_g0.6_tc2008.tsv.gz");
    CHECK(dump_filename(spec_for(Measure::AttRank)) ==
          "AttRank_uni1_a0.2_b0.5_g0.3_rho0.16_w3_tc2008_error1e-12.tsv.gz");
    CHECK(dump_filename(spec_for(Measure::PR, false)) == "PR_uni1_a0.5_error1e-12.tsv");
}

TEST_CASE("filename parsing inverts filename writing") {
    for (Measure m : bipdb::kAllMeasures) {
        for (bool compressed : {true, false}) {
            CAPTURE(int(m));
            DumpSpec spec = spec_for(m, compressed);
            spec.params.pr_alpha = 0.85;
            spec.params.att_rho = 0.25;
            spec.params.icc_window = 5;
            const auto parsed = parse_dump_filename(dump_filename(spec));
            REQUIRE(parsed.has_value());
            CHECK(parsed->measure == m);
            CHECK(parsed->graph_id == "uni1");
            CHECK(parsed->compressed == compressed);
            // Round-tripping the parsed spec reproduces the name exactly.
            CHECK(dump_filename(*parsed) == dump_filename(spec));
        }
    }
}

TEST_CASE("graph ids containing underscores parse unambiguously") {
    DumpSpec spec = spec_for(Measure::AttRank);
    spec.graph_id = "unified_graph_v2_1";
    const auto parsed = parse_dump_filename(dump_filename(spec));
    REQUIRE(parsed.has_value());
    CHECK(parsed->graph_id == "unified_graph_v2_1");
    CHECK(parsed->measure == Measure::AttRank);
}

TEST_CASE("parsing accepts full paths and rejects nonconforming names") {
    CHECK(parse_dump_filename("/tmp/out/PR_uni1_a0.5_error1e-12.tsv.gz").has_value());
    CHECK_FALSE(parse_dump_filename("PR_uni1_a0.5_error1e-12.txt").has_value());
    CHECK_FALSE(parse_dump_filename("XX_uni1.tsv.gz").has_value());       // unknown measure
    CHECK_FALSE(parse_dump_filename("PR_uni1.tsv.gz").has_value());       // missing params
    CHECK_FALSE(parse_dump_filename("PR_UNI1_a0.5_error1e-12.tsv.gz").has_value());
    CHECK_FALSE(parse_dump_filename("CC_.tsv.gz").has_value());           // empty graph id
    CHECK_FALSE(parse_dump_filename("CC_uni-1.tsv.gz").has_value());      // bad id char
    CHECK_FALSE(parse_dump_filename("iCC_uni1_y0.5.tsv.gz").has_value()); // non-integer window
    CHECK_FALSE(parse_dump_filename(".tsv.gz").has_value());
}

TEST_CASE("dump filenames reject malformed graph ids at write time") {
    DumpSpec spec = spec_for(Measure::CC);
    spec.graph_id = "Uni-1";
    CHECK_THROWS_AS(dump_filename(spec), std::invalid_argument);
    spec.graph_id = "";
    CHECK_THROWS_AS(dump_filename(spec), std::invalid_argument);
}

TEST_CASE("write_dump orders rows by descending score then ascending DOI") {
    oracle::Graph g;
    g.n = 4;
    g.year = {2001, 2002, 2003, 2004};
    g.edges = {{1, 0}, {2, 0}, {3, 2}};
    const bipdb::CitationGraph cg = testutil::to_graph(g);
    const ScoreVector cc = bipdb::citation_count(cg);

    oracle::TempDir dir("dump");
    const auto path = write_dump(cc, cg, spec_for(Measure::CC, false), dir.path);
    const std::vector<DumpEntry> rows = read_dump(path);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].doi.value == oracle::doi_of(0)); // score 2
    CHECK(rows[0].score == 2.0);
    CHECK(rows[1].doi.value == oracle::doi_of(2)); // score 1
    // scores 0 tie: DOIs ascending
    CHECK(rows[2].doi.value == oracle::doi_of(1));
    CHECK(rows[3].doi.value == oracle::doi_of(3));
}

TEST_CASE("round trip preserves scores exactly in both compressions") {
    const oracle::Graph g = oracle::random_graph(77, 300, 1990, 2010);
    const bipdb::CitationGraph cg = testutil::to_graph(g);
    MeasureParams p = canonical_params();
    p.current_year = 2010;
    const ScoreVector pr = bipdb::pagerank(cg, p);

    oracle::TempDir dir("dump");
    for (bool compressed : {true, false}) {
        CAPTURE(compressed);
        DumpSpec spec{Measure::PR, compressed ? std::string("gz") : std::string("plain"), p,
                      compressed};
        const auto path = write_dump(pr, cg, spec, dir.path);
        const std::vector<DumpEntry> rows = read_dump(path);
        REQUIRE(rows.size() == pr.scores.size());
        for (const DumpEntry& row : rows) {
            const auto id = cg.find(row.doi.value);
            REQUIRE(id.has_value());
            CHECK(row.score == pr.scores[*id]); // bitwise: 17 digits round-trip
        }
    }
}

TEST_CASE("gzip and plain dumps of the same scores parse identically") {
    const oracle::Graph g = oracle::random_graph(31, 120, 1995, 2010);
    const bipdb::CitationGraph cg = testutil::to_graph(g);
    const ScoreVector cc = bipdb::citation_count(cg);

    oracle::TempDir dir("dump");
    const auto gz = write_dump(cc, cg, spec_for(Measure::CC, true), dir.path);
    const auto plain = write_dump(cc, cg, spec_for(Measure::CC, false), dir.path);
    const auto rows_gz = read_dump(gz);
    const auto rows_plain = read_dump(plain);
    REQUIRE(rows_gz.size() == rows_plain.size());
    for (size_t i = 0; i < rows_gz.size(); ++i) {
        CHECK(rows_gz[i].doi == rows_plain[i].doi);
        CHECK(rows_gz[i].score == rows_plain[i].score);
    }
}

TEST_CASE("write_dump validates the score vector length") {
    const oracle::Graph g = oracle::random_graph(3, 50, 2000, 2010);
    const bipdb::CitationGraph cg = testutil::to_graph(g);
    ScoreVector cc = bipdb::citation_count(cg);
    cc.scores.pop_back();
    oracle::TempDir dir("dump");
    CHECK_THROWS_AS(write_dump(cc, cg, spec_for(Measure::CC), dir.path),
                    std::invalid_argument);
}

TEST_CASE("read_dump reports the offending line") {
    oracle::TempDir dir("dump");
    const std::string path = dir.file("CC_uni1.tsv");
    oracle::write_file(path, "10.1/a\t1\n10.1/b\tnot-a-number\n");
    try {
        read_dump(path);
        FAIL("expected ParseError");
    } catch (const bipdb::ParseError& e) {
        CHECK(e.line == 2);
    }

    oracle::write_file(path, "10.1/a\t1\textra\n");
    CHECK_THROWS_AS(read_dump(path), bipdb::ParseError);
    oracle::write_file(path, "10.1/a 1\n"); // no tab at all
    CHECK_THROWS_AS(read_dump(path), bipdb::ParseError);
}

TEST_CASE("convert_dump flips compression and preserves content bytes") {
    const oracle::Graph g = oracle::random_graph(8, 200, 1990, 2010);
    const bipdb::CitationGraph cg = testutil::to_graph(g);
    MeasureParams p = canonical_params();
    const ScoreVector ram = bipdb::ram(cg, p);

    oracle::TempDir dir("dump");
    oracle::TempDir out("conv");
    const auto gz = write_dump(ram, cg, spec_for(Measure::RAM, true), dir.path);

    const auto plain = convert_dump(gz, out.path, false);
    CHECK(plain.filename().string() == "RAM_uni1_g0.6_tc2008.tsv");
    const auto back = convert_dump(plain, out.path, true);
    CHECK(back.filename().string() == "RAM_uni1_g0.6_tc2008.tsv.gz");

    const auto original = read_dump(gz);
    const auto recovered = read_dump(back);
    REQUIRE(original.size() == recovered.size());
    for (size_t i = 0; i < original.size(); ++i) {
        CHECK(original[i].doi == recovered[i].doi);
        CHECK(original[i].score == recovered[i].score);
    }

    CHECK_THROWS_AS(convert_dump(dir.file("notadump.txt"), out.path, true),
                    bipdb::ConsistencyError);
}

TEST_CASE("scores keep seventeen significant digits") {
    oracle::Graph g;
    g.n = 2;
    g.year = {2000, 2001};
    g.edges = {{1, 0}};
    const bipdb::CitationGraph cg = testutil::to_graph(g);
    MeasureParams p = canonical_params();
    p.pr_alpha = 0.85;
    const ScoreVector pr = bipdb::pagerank(cg, p);

    oracle::TempDir dir("dump");
    const auto path = write_dump(pr, cg, {Measure::PR, "digits", p, false}, dir.path);
    const auto rows = read_dump(path);
    REQUIRE(rows.size() == 2);
    // Bitwise equality after the text round trip is the whole point.
    const auto id0 = cg.find(rows[0].doi.value);
    CHECK(rows[0].score == pr.scores[*id0]);
}
