// Writes the bundled case-study model files. Usage: gen_models <output-dir>
#include <cstdio>
#include <string>

#include "biobig/models.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: gen_models <output-dir>\n");
    return 2;
  }
  std::string dir = argv[1];
  try {
    biobig::saveModel(biobig::vesicleModel(1), dir + "/vesicle.biobig");
    biobig::saveModel(biobig::phagoModel(), dir + "/phago.biobig");
  } catch (const biobig::Error& e) {
    std::fprintf(stderr, "gen_models: %s\n", e.what());
    return 1;
  }
  std::printf("wrote %s/vesicle.biobig and %s/phago.biobig\n", dir.c_str(), dir.c_str());
  return 0;
}
