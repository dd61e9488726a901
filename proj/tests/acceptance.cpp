// Runs every acceptance criterion and prints one line per criterion.
#include <bvft/acceptance.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv)
{
    unsigned seed = 20240601;
    if (argc > 1)
        seed = static_cast<unsigned>(std::strtoul(argv[1], nullptr, 10));
    int failed = 0;
    for (int id = 1; id <= bvft::criterion_count; ++id) {
        const bvft::CriterionResult r = bvft::run_criterion(id, seed);
        std::cout << bvft::format_result(r) << std::endl;
        if (!r.passed())
            ++failed;
    }
    std::cout << (failed ? "FAILED: " : "ALL PASSED: ") << bvft::criterion_count - failed << '/'
              << bvft::criterion_count << " criteria\n";
    return failed ? 1 : 0;
}
