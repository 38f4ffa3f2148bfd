// Writes the k=4 atlas (JSON plus one DOT file per pattern) to a directory.
#include <iostream>

#include "girgmotif/experiment.hpp"

using namespace girgmotif;

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "atlas_out";
    auto at = run_atlas(4, 2.2, 2.0, 1, Variant::General);
    write_atlas(at, dir);
    for (std::size_t i = 0; i < at.rows.size(); ++i)
        std::cout << atlas_dot_name(at, i) << "  " << at.rows[i].report.instance.pattern.to_string() << "  "
                  << to_string(at.rows[i].report.unique) << '\n';
    std::cout << "render with: dot -Tsvg " << dir << "/" << atlas_dot_name(at, 0) << '\n';
}
