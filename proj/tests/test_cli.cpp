#include "duomagma/cli.hpp"
#include "duomagma/json_io.hpp"
#include "duomagma/semidirect.hpp"
#include "duomagma/verify.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace duomagma;

namespace {

const char* kF2Spec = R"({"base":{"kind":"cyclic","order":2,"symbols":["1","x"]},"pipeline":["hm0","semidirect-z"]})";
const char* kIx3 =
    R"({"kind":"pair","exponent":3,"left":{"kind":"step","pieces":[{"start":"0","value":{"kind":"atom","name":"1"}},{"start":"1/2","value":{"kind":"atom","name":"x"}}]}})";
const char* kQuarter =
    R"({"kind":"product-discrete","base":{"kind":"hm-subbasic","a":"0","b":"1","eps":"1/4","inner":{"kind":"subset","members":[{"kind":"atom","name":"1"}]}}})";

std::string f2_descriptor() {
  CommandResult r = cmd_build(kF2Spec);
  EXPECT_EQ(r.exit_code, kExitPass) << r.err;
  return r.out;
}

std::string ix3_certificate() {
  CommandResult r = cmd_witness(f2_descriptor(), kIx3, kQuarter);
  EXPECT_EQ(r.exit_code, kExitPass) << r.err;
  return r.out;
}

}  // namespace

TEST(CmdBuild, CyclicPipeline) {
  std::string out = f2_descriptor();
  MagmaPtr m = descriptor_from_document(parse_json_text(out));
  EXPECT_EQ(m->kind(), Magma::Kind::SemidirectZ);
  // the descriptor is canonical: rebuilding from it gives the same bytes
  EXPECT_EQ(canonical_dump(descriptor_document(*m)) + "\n", out);
  EXPECT_EQ(cmd_build(kF2Spec).out, out);
}

TEST(CmdBuild, TorusWithSeed) {
  CommandResult r = cmd_build(
      R"({"base":{"kind":"torus","dim":2},"pipeline":[{"op":"semidirect-aut","seeds":[[["5","1"],["-6","-1"]]]}]})");
  ASSERT_EQ(r.exit_code, kExitPass) << r.err;
  MagmaPtr m = descriptor_from_document(parse_json_text(r.out));
  EXPECT_EQ(m->kind(), Magma::Kind::SemidirectAut);
  EXPECT_EQ(m->semidirect_aut().registry->entries().size(), 1u);
}

TEST(CmdBuild, InputErrors) {
  EXPECT_EQ(cmd_build(R"({"base":{"kind":"cyclic","order":2})").exit_code, kExitInput);
  EXPECT_EQ(cmd_build(R"({"base":{"kind":"polygon"}})").exit_code, kExitInput);
  EXPECT_EQ(cmd_build(R"({"base":{"kind":"cyclic","order":2},"extra":1})").exit_code, kExitInput);
  EXPECT_EQ(cmd_build(R"({"base":{"kind":"torus","dim":2},"pipeline":["semidirect-z"]})").exit_code, kExitInput);
  CommandResult r = cmd_build("not json");
  EXPECT_EQ(r.exit_code, kExitInput);
  EXPECT_FALSE(r.err.empty());
}

TEST(CmdWitness, IxExample) {
  WitnessCertificate c = certificate_from_json(parse_json_text(ix3_certificate()));
  Element unit = Element::step(StepFunction::constant(Element::atom("1")));
  EXPECT_EQ(c.witness[0], Element::pair(unit, std::int64_t{-2}));
  EXPECT_EQ(c.witness[2], Element::pair(unit, std::int64_t{5}));
  EXPECT_TRUE(check_certificate(c).pass);
}

TEST(CmdWitness, UnitElementGivesTrivialCertificate) {
  const char* unit = R"({"kind":"pair","exponent":0,"left":{"kind":"step","pieces":[{"start":"0","value":{"kind":"atom","name":"1"}}]}})";
  CommandResult r = cmd_witness(f2_descriptor(), unit, kQuarter);
  ASSERT_EQ(r.exit_code, kExitPass) << r.err;
  WitnessCertificate c = certificate_from_json(parse_json_text(r.out));
  for (const auto& w : c.witness) EXPECT_EQ(w, unit_of(*c.magma));
}

TEST(CmdWitness, InputErrors) {
  const char* no_unit =
      R"({"kind":"product-discrete","base":{"kind":"hm-subbasic","a":"0","b":"1","eps":"1/4","inner":{"kind":"subset","members":[{"kind":"atom","name":"x"}]}}})";
  CommandResult r = cmd_witness(f2_descriptor(), kIx3, no_unit);
  EXPECT_EQ(r.exit_code, kExitInput);
  EXPECT_NE(r.err.find("NotUnitNeighborhood"), std::string::npos) << r.err;
  EXPECT_EQ(cmd_witness(f2_descriptor(), kIx3, kQuarter, "roelcke").exit_code, kExitInput);
  EXPECT_EQ(cmd_witness(f2_descriptor(), R"({"kind":"atom","name":"x"})", kQuarter).exit_code, kExitInput);
  EXPECT_EQ(cmd_witness(f2_descriptor(), kIx3, "{").exit_code, kExitInput);
}

TEST(CmdVerify, PassFailAndMalformed) {
  std::string cert = ix3_certificate();
  CommandResult ok = cmd_verify(cert);
  EXPECT_EQ(ok.exit_code, kExitPass);
  EXPECT_EQ(ok.out, "{\"verdict\":\"pass\"}\n");

  Json j = parse_json_text(cert);
  j["witness"]["factors"][2]["exponent"] = 4;
  CommandResult bad = cmd_verify(canonical_dump(j));
  EXPECT_EQ(bad.exit_code, kExitFail);
  Json verdict = parse_json_text(bad.out);
  EXPECT_EQ(verdict["verdict"], "fail");
  EXPECT_EQ(verdict["clause"], "product-mismatch");

  EXPECT_EQ(cmd_verify(cert.substr(0, cert.size() / 2)).exit_code, kExitInput);
  Json extra = parse_json_text(cert);
  extra["comment"] = "hi";
  EXPECT_EQ(cmd_verify(canonical_dump(extra)).exit_code, kExitInput);
  Json old = parse_json_text(cert);
  old["version"] = "duomagma-v0";
  EXPECT_EQ(cmd_verify(canonical_dump(old)).exit_code, kExitInput);
}

TEST(CmdVerify, TorusPipeline) {
  std::string desc = cmd_build(
      R"({"base":{"kind":"torus","dim":2},"pipeline":[{"op":"semidirect-aut","seeds":[[["5","1"],["-6","-1"]]]}]})").out;
  const char* x = R"({"kind":"pair","automorphism":[["1","0"],["0","1"]],"left":{"kind":"torus","coords":["2/5","1/3"]}})";
  const char* box = R"({"kind":"product-discrete","base":{"kind":"eps-box","eps":"1/10","coords":[]}})";
  CommandResult w = cmd_witness(desc, x, box);
  ASSERT_EQ(w.exit_code, kExitPass) << w.err;
  EXPECT_EQ(cmd_verify(w.out).exit_code, kExitPass);
  // the certificate carries the grown registry, so it verifies on its own
  WitnessCertificate c = certificate_from_json(parse_json_text(w.out));
  EXPECT_GE(c.magma->semidirect_aut().registry->entries().size(), 1u);
}

TEST(CmdShrink, Examples) {
  CommandResult r = cmd_shrink(R"([["5/2","1"]])", "1/2", "enumeration");
  ASSERT_EQ(r.exit_code, kExitPass) << r.err;
  Json j = parse_json_text(r.out);
  EXPECT_EQ(int_matrix_from_json(j["A"]), (IntMatrix{{1, 0}, {-2, 1}}));
  EXPECT_EQ(j["XA"], parse_json_text(R"([["1/2","1"]])"));
  EXPECT_EQ(j["det"], "1");
  EXPECT_EQ(r.err, "det A = 1\n");
  EXPECT_EQ(cmd_shrink(R"({"matrix":[["5/2","1"]]})", "1/2").out, cmd_shrink(R"([["5/2","1"]])", "1/2").out);

  CommandResult id = cmd_shrink(R"([["1/4","0","3","7"],["0","1/4","5","9"]])", "1/2");
  ASSERT_EQ(id.exit_code, kExitPass);
  EXPECT_EQ(int_matrix_from_json(parse_json_text(id.out)["A"]), IntMatrix::identity(4));
}

TEST(CmdShrink, InputErrors) {
  EXPECT_EQ(cmd_shrink(R"([["1","2","3"],["4","5","6"]])", "1/2").exit_code, kExitInput);
  EXPECT_EQ(cmd_shrink(R"([["5/2","1"]])", "half").exit_code, kExitInput);
  EXPECT_EQ(cmd_shrink(R"([["5/2","1"]])", "1/2", "magic").exit_code, kExitInput);
}

TEST(CmdSelftest, DeterministicAndFaultInjection) {
  CommandResult a = cmd_selftest(7), b = cmd_selftest(7);
  EXPECT_EQ(a.exit_code, kExitPass) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(cmd_selftest(7, true).exit_code, kExitFail);
}

TEST(RoundTrip, DocumentsAreStable) {
  std::string cert = ix3_certificate();
  EXPECT_EQ(canonical_dump(certificate_to_json(certificate_from_json(parse_json_text(cert)))) + "\n", cert);
  std::string desc = f2_descriptor();
  EXPECT_EQ(canonical_dump(descriptor_document(*descriptor_from_document(parse_json_text(desc)))) + "\n", desc);
}

TEST(RunCli, FilesEndToEnd) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("duomagma_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  auto run = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
  };
  std::string spec = write("spec.json", kF2Spec);
  std::string desc = (dir / "f2.json").string();
  std::string cert = (dir / "cert.json").string();
  EXPECT_EQ(run({"duomagma", "build", "--spec", spec, "--out", desc}), kExitPass);
  EXPECT_EQ(run({"duomagma", "witness", "--descriptor", desc, "--element", kIx3, "--neighborhood", kQuarter, "--mode",
                 "duo", "--out", cert}),
            kExitPass);
  EXPECT_EQ(run({"duomagma", "verify", "--certificate", cert}), kExitPass);
  write("trunc.json", "{\"version\":");
  EXPECT_EQ(run({"duomagma", "verify", "--certificate", (dir / "trunc.json").string()}), kExitInput);
  EXPECT_EQ(run({"duomagma", "verify", "--certificate", (dir / "missing.json").string()}), kExitInput);
  EXPECT_EQ(run({"duomagma", "frobnicate"}), kExitInput);
  fs::remove_all(dir);
}
