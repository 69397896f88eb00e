#include <doctest.h>

#include <sstream>
#include <string>

#include "cluspath/error.hpp"
#include "cluspath/io.hpp"
#include "support/support.hpp"

using namespace cluspath;

namespace {

std::string error_of(const std::string& text) {
    std::istringstream in(text);
    try {
        io::read_long_csv(in);
    } catch (const DataError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("long csv with three entities and four timestamps") {
    std::ostringstream text;
    text << "entity,time,x,y\n";
    for (const char* e : {"fr", "de", "it"}) {
        for (int t = 0; t < 4; ++t) {
            text << e << "," << 2000 + t << "," << t << "," << -t << "\n";
        }
    }
    std::istringstream in(text.str());
    const Dataset ds = io::read_long_csv(in);
    CHECK(ds.size() == 12);
    CHECK(ds.dim() == 2);
    CHECK(ds.entity_count() == 3);
}

TEST_CASE("schema selects columns") {
    std::istringstream in("\xEF\xBB\xBFid,year,\"gdp, real\",skip\n\"a\",1,2,9\na,2,3,9\n");
    io::CsvSchema schema{"id", "year", {"gdp, real"}};
    const Dataset ds = io::read_long_csv(in, schema);
    CHECK(ds.dim() == 1);
    CHECK(ds.descriptor(1)[0] == 3.0);
}

TEST_CASE("load errors name the line") {
    CHECK(error_of("entity,time,x\na,1,1\na,1,2\n").find("line 3") != std::string::npos);
    CHECK(error_of("entity,time,x\na,1,1\na,1,2\n").find("first seen on line 2") !=
          std::string::npos);
    CHECK(error_of("entity,time,x\na,1,abc\n").find("line 2") != std::string::npos);
    CHECK(error_of("entity,time,x\na,1\n").find("line 2") != std::string::npos);
    CHECK(error_of("entity,time,x\na,zz,1\n").find("line 2") != std::string::npos);
    CHECK(error_of("entity,x\na,1\n").find("time") != std::string::npos);
    CHECK_FALSE(error_of("entity,time\na,1\n").empty());
    CHECK_FALSE(error_of("").empty());
    CHECK_THROWS_AS(io::load_long_csv("/nonexistent/file.csv"), DataError);
}

TEST_CASE("single observation loads and is degenerate") {
    std::istringstream in("entity,time,x\na,1,5\n");
    const Dataset ds = io::read_long_csv(in);
    CHECK(ds.size() == 1);
    CHECK(ds.diameters().degenerate_d());
    CHECK(ds.diameters().degenerate_t());
}

TEST_CASE("write then read round-trips exactly") {
    const Dataset ds = testing::random_dataset({4, 5, 3, 10.0}, 5);
    std::stringstream buf;
    io::write_long_csv(buf, ds);
    const Dataset back = io::read_long_csv(buf);
    CHECK(back == ds);
}

TEST_CASE("format_double keeps 17 significant digits") {
    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(io::split_csv_record("a,\"b,c\",\"d\"\"e\"") ==
          std::vector<std::string>{"a", "b,c", "d\"e"});
}
