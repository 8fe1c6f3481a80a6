#pragma once

#include "dimerlab/dimer.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

inline std::string read_corpus_file(const std::string& name) {
    std::ifstream in(std::string(DIMERLAB_CORPUS) + "/" + name);
    if (!in) throw std::runtime_error("cannot open corpus file " + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline dimerlab::Dimer load(const std::string& name) { return dimerlab::parse_dimer(read_corpus_file(name + ".dtf")); }

inline const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names{"torus1",   "spp",      "gallery1", "gallery2",
                                                "gallery3", "gallery4", "g2hex"};
    return names;
}
