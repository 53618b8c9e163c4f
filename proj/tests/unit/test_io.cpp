#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "clsel/error.hpp"
#include "clsel/io.hpp"

using namespace clsel;
using namespace clsel::io;

namespace {

RawTable parse(const std::string& text, ColumnRef ref = std::string("y")) {
    std::istringstream in(text);
    return load_table(in, ref);
}

std::string what_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("loading tables") {
    const auto t = parse("a,b,y\n0,NA,1\n2,1,0\n1,,1\n");
    CHECK(t.n() == 3);
    CHECK(t.p() == 2);
    CHECK(t.names == std::vector<std::string>{"a", "b"});
    CHECK(t.missing_count() == 2);
    CHECK(t.columns[0] == std::vector<std::int8_t>{0, 2, 1});
    CHECK(t.columns[1][0] == kMissing);
    CHECK(t.response == std::vector<double>{1, 0, 1});

    const auto tab = parse("# comment\ny\ta\tb\n1\t0\t1\n0\t1\t1\n", std::size_t{1});
    CHECK(tab.response_name == "y");
    CHECK(tab.names == std::vector<std::string>{"a", "b"});
    CHECK(tab.missing_count() == 0);

    CHECK(what_of("a,b,y\n0,3,1\n").find("line 2") != std::string::npos);
    CHECK(what_of("a,b,y\n0,3,1\n").find("'3'") != std::string::npos);
    CHECK(what_of("a,b,y\n0,3,1\n").find("column 2") != std::string::npos);
    CHECK(what_of("a,b,y\n0,1\n").find("line 2") != std::string::npos);
    CHECK(what_of("a,b,y\n0,1,2\n").find("response") != std::string::npos);
    CHECK_THROWS_AS(parse("a,b\n0,1\n"), ParseError);
    CHECK_THROWS_AS(parse("a,b,y\n0,1,1\n", std::size_t{4}), ParseError);
    CHECK_THROWS_AS(load_table("/nonexistent/file.csv", std::string("y")), IoError);
}

TEST_CASE("imputation draws from the observed marginal") {
    const auto zeros = parse("a,y\n0,1\n0,0\n0,1\nNA,0\n");
    ImputationReport rep;
    const auto z = impute(zeros, 1, &rep);
    CHECK(z.columns[0][3] == 0);
    CHECK(rep.imputed_cells == 1);
    CHECK(rep.imputed_per_column == std::vector<std::size_t>{1});

    const auto twos = parse("a,y\n2,1\nNA,0\n2,1\n");
    CHECK(impute(twos, 5).columns[0][1] == 2);

    const auto half = parse("a,b,y\n0,1,1\n0,0,0\n1,1,1\n1,NA,0\nNA,0,1\n");
    int ones = 0;
    for (std::uint64_t s = 0; s < 10'000; ++s) {
        const auto out = impute(half, s);
        // observed cells never change
        CHECK(out.columns[0][0] == 0);
        CHECK(out.columns[0][2] == 1);
        CHECK(out.columns[1][1] == 0);
        ones += out.columns[0][4];
    }
    CHECK(std::abs(ones / 10'000.0 - 0.5) < 0.02);
    CHECK(impute(half, 3).columns == impute(half, 3).columns);

    const auto empty = parse("a,b,y\nNA,1,1\nNA,0,0\n");
    CHECK_THROWS_AS(impute(empty, 1), InvalidDataset);
}

TEST_CASE("dropping uninformative columns") {
    const auto t = parse("z,one,mix,y\n0,1,0,1\n0,1,1,0\n0,1,2,1\n");
    DropReport rep;
    const auto kept = drop_uninformative(t, false, &rep);
    CHECK(kept.names == std::vector<std::string>{"one", "mix"});
    CHECK(rep.dropped == std::vector<std::size_t>{0});
    CHECK(rep.dropped_names == std::vector<std::string>{"z"});
    const auto strict = drop_uninformative(t, true, &rep);
    CHECK(strict.names == std::vector<std::string>{"mix"});
    CHECK(rep.dropped.size() + strict.p() == t.p());

    // 9307 columns of which 1657 never express
    RawTable big;
    big.response = {0, 1, 0, 1};
    big.response_name = "y";
    for (std::size_t j = 0; j < 9307; ++j) {
        big.names.push_back("snp" + std::to_string(j));
        big.columns.push_back(j < 1657 ? std::vector<std::int8_t>{0, 0, 0, 0}
                                       : std::vector<std::int8_t>{0, 1, 2, 1});
    }
    DropReport big_rep;
    CHECK(drop_uninformative(big, false, &big_rep).p() == 7650);
    CHECK(big_rep.dropped.size() == 1657);
}

TEST_CASE("conversion and writing") {
    const auto t = parse("a,b,y\n0,1,1\n1,1,0\n");
    const Dataset d = to_dataset(t);
    CHECK(d.encoding() == Encoding::binary);
    CHECK(d.name(1) == "b");
    CHECK(to_dataset(parse("a,y\n2,1\n0,0\n")).encoding() == Encoding::ternary);
    CHECK_THROWS_AS(to_dataset(parse("a,y\nNA,1\n0,0\n")), InvalidDataset);

    std::ostringstream out;
    write_table(out, d, "y");
    CHECK(out.str() == "a,b,y\n0,1,1\n1,1,0\n");
    std::istringstream back(out.str());
    CHECK(load_table(back, std::string("y")).columns == t.columns);
}

TEST_CASE("raster export") {
    CHECK(genotype_colour(0) == Rgb{0, 158, 115});
    CHECK(genotype_colour(1) == Rgb{255, 255, 255});
    CHECK(genotype_colour(2) == Rgb{255, 105, 180});
    CHECK_THROWS_AS(genotype_colour(3), InvalidArgument);

    // observation 1 is a control, observation 2 a case: the case comes first
    Eigen::MatrixXd x(2, 2);
    x << 0, 1, 2, 0;
    Eigen::VectorXd y(2);
    y << 0, 1;
    const Dataset d(x, y);
    std::ostringstream p6;
    raster_export(p6, d, {0, 1});
    using namespace std::string_literals;
    const std::string expect = "P6\n2 2\n255\n"
                               "\xff\x69\xb4" "\x00\x9e\x73" "\x00\x9e\x73" "\xff\xff\xff"s;
    CHECK(expect.size() == 23);
    CHECK(p6.str() == expect);

    std::ostringstream p3;
    raster_export(p3, d, {1}, PixmapFormat::ascii_p3, {"hello"});
    CHECK(p3.str() == "P3\n# hello\n1 2\n255\n0 158 115\n255 255 255\n");

    CHECK_THROWS_AS(raster_export(p3, d, {2}), InvalidArgument);
    CHECK_THROWS_AS(raster_export("/nonexistent/dir/x.ppm", d, {0}), IoError);

    // dimensions: selected count by n
    Eigen::MatrixXd wide = Eigen::MatrixXd::Ones(120, 600);
    Eigen::VectorXd yy = Eigen::VectorXd::Zero(120);
    yy.head(60).setOnes();
    std::vector<std::size_t> sel(575);
    for (std::size_t j = 0; j < sel.size(); ++j) sel[j] = j;
    std::ostringstream big;
    raster_export(big, Dataset(wide, yy), sel);
    CHECK(big.str().rfind("P6\n575 120\n255\n", 0) == 0);
    CHECK(big.str().size() == std::string("P6\n575 120\n255\n").size() + 575 * 120 * 3);
}
