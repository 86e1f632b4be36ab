#include <doctest.h>

#include <json.hpp>

#include "lipeval/cli.hpp"
#include "support.hpp"

using namespace lipeval;
using namespace lipeval::testing;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome lipeval_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string p(const TempDir& d, const std::string& name) { return (d / name).string(); }

}  // namespace

TEST_CASE("help exits cleanly and lists every flag") {
  CHECK(lipeval_cli({"--help"}).code == 0);
  const std::map<std::string, std::vector<std::string>> flags{
      {"train", {"--train", "--schema", "--classifier", "--embeddings", "--lambda", "--out", "--format"}},
      {"evaluate", {"--original", "--transformed", "--kind", "--model-source", "--model-target", "--threshold",
                    "--report", "--plot", "--predictions-original", "--predictions-transformed"}},
      {"score", {"--dist-o", "--dist-pt", "--dist-po"}},
      {"inspect", {"--model", "--corpus", "--embeddings"}},
      {"run", {"--config"}}};
  for (const auto& [cmd, names] : flags) {
    const auto r = lipeval_cli({cmd, "--help"});
    CHECK(r.code == 0);
    for (const auto& f : names) CHECK_MESSAGE(r.out.find(f) != std::string::npos, cmd, " ", f);
  }
}

TEST_CASE("usage errors exit 2") {
  CHECK(lipeval_cli({}).code == 2);
  CHECK(lipeval_cli({"frobnicate"}).code == 2);
  CHECK(lipeval_cli({"score", "--bogus"}).code == 2);
  CHECK(lipeval_cli({"run"}).code == 2);
  CHECK(lipeval_cli({"run", "--config", "/definitely/not/here.conf"}).code == 2);
}

TEST_CASE("train and evaluate on the planted fixture") {
  const TempDir d;
  write_planted(d.path(), {.documents = 400, .flip_fraction = 0.2});
  const std::vector<std::string> train{"train", "--train", p(d, "train.tsv"), "--schema", "M,F",
                                       "--property", "author-gender", "--lambda", "0.001", "--out",
                                       p(d, "model.txt")};
  const auto t = lipeval_cli(train);
  REQUIRE(t.code == 0);
  CHECK(t.out.find("training rows: 200") != std::string::npos);
  CHECK(t.out.find("final loss") != std::string::npos);
  const auto model = read_text(d / "model.txt");
  REQUIRE(lipeval_cli(train).code == 0);
  CHECK(read_text(d / "model.txt") == model);

  SUBCASE("embed without embeddings is a usage error") {
    auto args = train;
    args.insert(args.end(), {"--classifier", "embed"});
    CHECK(lipeval_cli(args).code == 2);
  }

  SUBCASE("evaluate prints the verdict and writes reports") {
    const std::vector<std::string> eval{"evaluate", "--original", p(d, "test.tsv"), "--transformed",
                                        p(d, "transformed.tsv"), "--kind", "paraphrase", "--model-source",
                                        p(d, "model.txt"), "--report", p(d, "report.json"), "--plot",
                                        p(d, "plot.tsv")};
    const auto e = lipeval_cli(eval);
    REQUIRE(e.code == 0);
    CHECK(e.out.find("TransformationBias") != std::string::npos);
    const auto report = read_text(d / "report.json");
    CHECK(nlohmann::json::parse(report)["diagnosis"]["verdict"] == "TransformationBias");
    CHECK(read_text(d / "plot.tsv").rfind("label\tdist_o\tdist_po\tdist_pt\n", 0) == 0);
    REQUIRE(lipeval_cli(eval).code == 0);
    CHECK(read_text(d / "report.json") == report);
  }

  SUBCASE("identity transform shows equal rows and p = 1") {
    write_text(d / "same.tsv", read_text(d / "test.tsv"));
    const auto e = lipeval_cli({"evaluate", "--original", p(d, "test.tsv"), "--transformed", p(d, "same.tsv"),
                                "--kind", "identity", "--model-source", p(d, "model.txt"), "--report",
                                p(d, "id.json")});
    REQUIRE(e.code == 0);
    const auto j = nlohmann::json::parse(read_text(d / "id.json"));
    CHECK(j["dist_po"] == j["dist_pt"]);
    CHECK(j["chi2"]["p_value"] == 1.0);
    CHECK(j["kl_o_po"] == j["kl_o_pt"]);
    CHECK(e.out.find("p = 1\n") != std::string::npos);
  }

  SUBCASE("dumped predictions replay to the same report") {
    const std::vector<std::string> base{"evaluate", "--original", p(d, "test.tsv"), "--transformed",
                                        p(d, "transformed.tsv"), "--kind", "paraphrase"};
    auto live = base;
    live.insert(live.end(), {"--model-source", p(d, "model.txt"), "--report", p(d, "live.json"), "--dump-po",
                             p(d, "po.tsv"), "--dump-pt", p(d, "pt.tsv")});
    REQUIRE(lipeval_cli(live).code == 0);
    auto replay = base;
    replay.insert(replay.end(), {"--predictions-original", p(d, "po.tsv"), "--predictions-transformed",
                                 p(d, "pt.tsv"), "--schema", "M,F", "--property", "author-gender", "--report",
                                 p(d, "replay.json")});
    REQUIRE(lipeval_cli(replay).code == 0);
    CHECK(read_text(d / "replay.json") == read_text(d / "live.json"));
  }

  SUBCASE("misaligned transformed file exits 1 and writes nothing") {
    std::string body = read_text(d / "transformed.tsv");
    body.erase(body.rfind('\n', body.size() - 2) + 1);  // drop the last row
    write_text(d / "short.tsv", body);
    const auto e = lipeval_cli({"evaluate", "--original", p(d, "test.tsv"), "--transformed", p(d, "short.tsv"),
                                "--kind", "paraphrase", "--model-source", p(d, "model.txt"), "--report",
                                p(d, "never.json")});
    CHECK(e.code == 1);
    CHECK(e.err.find("MissingId") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(d / "never.json"));
  }

  SUBCASE("inspect") {
    const auto i = lipeval_cli({"inspect", "--model", p(d, "model.txt")});
    CHECK(i.code == 0);
    CHECK(i.out.find("labels: M F") != std::string::npos);
  }
}

TEST_CASE("data errors exit 1 with the underlying message") {
  const TempDir d;
  write_text(d / "bad.tsv", "id\ttext\tlabel\n1\thello\tM\n2\tworld\tQ\n");
  const auto r = lipeval_cli({"train", "--train", p(d, "bad.tsv"), "--schema", "M,F", "--out", p(d, "m.txt")});
  CHECK(r.code == 1);
  CHECK(r.err.find("UnknownLabel") != std::string::npos);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(d / "m.txt"));
}

TEST_CASE("precomputed predictions give the published-style KL in the report") {
  const TempDir d;
  std::string test = "id\ttext\tlabel\n", same = "id\ttext\n", po, pt;
  for (int i = 0; i < 100; ++i) {
    const auto id = "d" + std::to_string(i);
    const auto gold = i < 52 ? "M" : "F";
    test += id + "\ttext " + id + "\t" + gold + "\n";
    same += id + "\tother " + id + "\n";
    po += id + "\t" + gold + "\n";
    pt += id + "\t" + (i < 64 ? "M" : "F") + "\n";
  }
  write_text(d / "test.tsv", test);
  write_text(d / "tr.tsv", same);
  write_text(d / "po.tsv", po);
  write_text(d / "pt.tsv", pt);
  const auto r = lipeval_cli({"evaluate", "--original", p(d, "test.tsv"), "--transformed", p(d, "tr.tsv"),
                              "--kind", "translation", "--predictions-original", p(d, "po.tsv"),
                              "--predictions-transformed", p(d, "pt.tsv"), "--schema", "M,F", "--report",
                              p(d, "r.json")});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(read_text(d / "r.json"));
  CHECK(j["kl_o_pt"].get<double>() == doctest::Approx(0.0301).epsilon(1e-3));
  CHECK(std::abs(j["kl_o_pt"].get<double>() - 0.034) <= 0.01);

  SUBCASE("schema is required with predictions") {
    CHECK(lipeval_cli({"evaluate", "--original", p(d, "test.tsv"), "--transformed", p(d, "tr.tsv"),
                       "--predictions-original", p(d, "po.tsv"), "--predictions-transformed", p(d, "pt.tsv"),
                       "--report", p(d, "r2.json")})
              .code == 2);
  }
}

TEST_CASE("score") {
  const TempDir d;
  write_text(d / "o.tsv", "M\t0.52\nF\t0.48\n");
  write_text(d / "pt.tsv", "F\t0.36\nM\t0.64\n");
  write_text(d / "a.tsv", "label\tcount\nM\t50\nF\t50\n");
  write_text(d / "b.tsv", "# counts\nM\t70\nF\t30\n");
  write_text(d / "x.tsv", "M\t0.5\nX\t0.5\n");

  const auto same = lipeval_cli({"score", "--dist-o", p(d, "a.tsv"), "--dist-pt", p(d, "a.tsv")});
  REQUIRE(same.code == 0);
  CHECK(same.out.find("kl_o_pt\t0.000000\n") != std::string::npos);
  CHECK(same.out.find("\tp 1\n") != std::string::npos);

  const auto rounded = lipeval_cli({"score", "--dist-o", p(d, "o.tsv"), "--dist-pt", p(d, "pt.tsv")});
  REQUIRE(rounded.code == 0);
  CHECK(rounded.out.find("kl_o_pt\t0.030115\n") != std::string::npos);

  const auto chi = lipeval_cli({"score", "--dist-o", p(d, "a.tsv"), "--dist-pt", p(d, "b.tsv")});
  REQUIRE(chi.code == 0);
  CHECK(chi.out.find("statistic 8.3333\tdof 1\tp 0.00389") != std::string::npos);

  CHECK(lipeval_cli({"score", "--dist-o", p(d, "o.tsv"), "--dist-pt", p(d, "x.tsv")}).code == 1);
}

TEST_CASE("the built binary behaves like the library entry point") {
  const TempDir d;
  write_text(d / "a.tsv", "M\t50\nF\t50\n");
  write_text(d / "b.tsv", "M\t70\nF\t30\n");
  const std::string cmd = std::string(LIPEVAL_CLI_PATH) + " score --dist-o " + p(d, "a.tsv") + " --dist-pt " +
                          p(d, "b.tsv") + " > " + p(d, "out.txt");
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(read_text(d / "out.txt") ==
        lipeval_cli({"score", "--dist-o", p(d, "a.tsv"), "--dist-pt", p(d, "b.tsv")}).out);
}
