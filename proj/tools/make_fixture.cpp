// Writes the planted-marker fixture used in the README walkthrough.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lipeval/error.hpp"
#include "lipeval/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic planted-marker corpus with a transformed test set"};
  std::string out_dir = ".";
  lipeval::synthetic::PlantedOptions opt;
  app.add_option("--out-dir", out_dir, "Directory for the generated files")->capture_default_str();
  app.add_option("--documents", opt.documents, "Total documents (half train, half test)")->capture_default_str();
  app.add_option("--flip", opt.flip_fraction, "Fraction of test documents flipped F -> M")->capture_default_str();
  app.add_option("--seed", opt.seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto fx = lipeval::synthetic::make_planted_fixture(opt);
    auto identity = opt;
    identity.identity = true;
    const auto id_fx = lipeval::synthetic::make_planted_fixture(identity);

    {
      std::ofstream f(fs::path(out_dir) / "train.tsv");
      lipeval::synthetic::write_corpus_tsv(f, fx.train);
    }
    {
      std::ofstream f(fs::path(out_dir) / "test.tsv");
      lipeval::synthetic::write_corpus_tsv(f, fx.test);
    }
    {
      std::ofstream f(fs::path(out_dir) / "paraphrased.tsv");
      lipeval::synthetic::write_transformed_tsv(f, fx.transformed);
    }
    {
      std::ofstream f(fs::path(out_dir) / "identity.tsv");
      lipeval::synthetic::write_transformed_tsv(f, id_fx.transformed);
    }
    {
      std::ofstream f(fs::path(out_dir) / "paraphrase.conf");
      f << "# planted-marker paraphrase experiment\n"
           "property = author-gender\n"
           "labels = M,F\n"
           "kind = paraphrase\n"
           "train = train.tsv\n"
           "test = test.tsv\n"
           "transformed = paraphrased.tsv\n"
           "classifier = tf\n"
           "lambda = 0.001\n"
           "report = report.json\n"
           "plot = plot.tsv\n";
    }
    std::cout << "wrote fixture to " << out_dir << " (" << fx.flipped_ids.size() << " flipped test documents)\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
