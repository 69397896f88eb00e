#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "cluspath/log.hpp"

int main(int argc, char** argv) {
    // Expected warnings from degenerate fixtures would drown the report.
    cluspath::log::ScopedSink quiet([](std::string_view) {});
    doctest::Context context(argc, argv);
    return context.run();
}
