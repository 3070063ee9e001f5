// veriq: build knowledge models, answer test items, and run or score
// administration sessions.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "veriq/error.hpp"
#include "veriq/harness/engine.hpp"
#include "veriq/harness/http_api.hpp"
#include "veriq/harness/sessions.hpp"
#include "veriq/harness/transcript.hpp"
#include "veriq/kb/assertion.hpp"
#include "veriq/psych/norms.hpp"

namespace {

using namespace veriq;
using nlohmann::json;

int ExitCode(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
      return 2;
    case ErrorCode::kInvalidArgument:
      return 3;
    case ErrorCode::kFormat:
      return 4;
    case ErrorCode::kNotFound:
      return 5;
    case ErrorCode::kEmptyKnowledgeBase:
      return 6;
    case ErrorCode::kUnknownConcepts:
    case ErrorCode::kNoConcepts:
      return 7;
    case ErrorCode::kSolver:
      return 8;
    case ErrorCode::kConfig:
      return 9;
    case ErrorCode::kConflict:
      return 10;
  }
  return 1;
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "short write on " + path);
}

harness::Clock MakeClock(const std::string& fixed_time) {
  return fixed_time.empty() ? harness::DefaultClock() : harness::FixedClock(fixed_time);
}

struct IngestArgs {
  std::string dump;
  std::string out;
  std::string weighting = "sqrt";
  harness::IngestOptions options;
};

int RunIngest(IngestArgs& args) {
  std::ifstream in(args.dump);
  if (!in) throw Error(ErrorCode::kIo, "cannot open assertion dump: " + args.dump);
  if (args.weighting == "identity") {
    args.options.weighting.mode = kb::WeightingMode::kIdentity;
  } else if (args.weighting != "sqrt") {
    throw Error(ErrorCode::kInvalidArgument, "weighting must be sqrt or identity");
  }
  harness::IngestSummary summary;
  const auto model = harness::BuildKnowledgeModel(in, args.options, &summary);
  spectral::SaveModel(model, args.out);

  const auto& p = summary.parse;
  std::printf("lines %zu  accepted %zu  malformed %zu  other-language %zu\n", p.lines, p.accepted, p.malformed,
              p.filtered_language);
  if (p.malformed_warning()) std::fprintf(stderr, "warning: more than 10%% of lines were malformed\n");
  std::printf("retained assertions %zu\n", summary.retained_assertions);
  std::printf("matrix %zu concepts x %zu features, %zu nonzeros\n", summary.concepts, summary.features,
              summary.nonzeros);
  std::printf("k %zu (requested %zu), %zu iterations\n", summary.k, summary.requested_k, summary.iterations);
  std::printf("leading singular values:");
  for (double s : summary.leading_singular_values) std::printf(" %.6g", s);
  std::printf("\nwrote %s (checksum %08x)\n", args.out.c_str(), spectral::ModelChecksum(model));
  return 0;
}

struct AnswerArgs {
  std::string model;
  std::string kind;
  std::vector<std::string> text;
  bool json = false;
  bool keep_subsumed = false;
};

int RunAnswer(const AnswerArgs& args) {
  const auto kind = ParseSubtestKind(args.kind);
  if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown kind '" + args.kind + "'");
  const auto model = spectral::LoadModel(harness::ResolveModelPath(args.model));
  harness::EngineConfig engine;
  engine.drop_subsumed = !args.keep_subsumed;
  const auto config = engine.pipeline();

  auto joined = [&] {
    std::string s;
    for (const auto& t : args.text) s += (s.empty() ? "" : " ") + t;
    return s;
  };
  qa::Answer answer;
  switch (*kind) {
    case SubtestKind::kInformation:
    case SubtestKind::kComprehension:
      answer = qa::AnswerOpenQuestion(joined(), model, config, *kind);
      break;
    case SubtestKind::kVocabulary:
      answer = qa::AnswerVocabulary(joined(), model, config);
      break;
    case SubtestKind::kWordReasoning:
      if (args.text.size() > 3) throw Error(ErrorCode::kInvalidArgument, "word_reasoning takes 1 to 3 clues");
      answer = qa::AnswerWordReasoning(qa::ClueState(args.text), model, config);
      break;
    case SubtestKind::kSimilarities:
      if (args.text.size() != 2) throw Error(ErrorCode::kInvalidArgument, "similarities takes exactly two words");
      answer = qa::AnswerSimilarities(args.text[0], args.text[1], model, config);
      break;
  }

  if (args.json) {
    std::cout << json{{"plan", harness::PlanToJson(answer.plan)},
                      {"answers", harness::AnswersToJson(answer.answers, *kind)}}
                     .dump(2)
              << "\n";
    return 0;
  }
  std::cout << "concepts:";
  for (const auto& name : answer.plan.retained_names()) std::cout << " [" << name << "]";
  std::cout << "\n";
  if (!answer.plan.allowed.empty()) {
    std::cout << "relations:";
    for (const auto& r : answer.plan.allowed) std::cout << " " << r;
    std::cout << "\n";
  }
  int rank = 1;
  for (const auto& f : answer.answers) {
    const auto shown = *kind == SubtestKind::kWordReasoning ? f.feature.concept_name : f.feature.Render();
    std::cout << std::setw(2) << rank++ << "  " << std::left << std::setw(36) << shown << std::right << " "
              << std::fixed << std::setprecision(6) << f.score << "\n";
  }
  if (answer.answers.empty()) std::cout << "(no answers)\n";
  return 0;
}

struct BatchArgs {
  std::string model;
  std::string pool;
  std::string out;
  std::string fixed_time;
};

int RunBatch(const BatchArgs& args) {
  const auto model = spectral::LoadModel(harness::ResolveModelPath(args.model));
  const auto pool = psych::LoadItemPool(args.pool);
  const auto transcript =
      harness::RunBatch(model, harness::EngineConfig{}.pipeline(), pool, MakeClock(args.fixed_time));
  if (args.out.empty() || args.out == "-") {
    std::cout << transcript.Serialize();
  } else {
    transcript.Save(args.out);
    std::size_t failed = 0;
    for (const auto& r : transcript.records) failed += r.error.empty() ? 0 : 1;
    std::fprintf(stderr, "%zu records (%zu without answers) -> %s\n", transcript.records.size(), failed,
                 args.out.c_str());
  }
  return 0;
}

struct ScoreArgs {
  std::string transcript;
  std::string pool;
  std::string norms;
  std::string age = "4y0m";
  std::vector<std::string> compositions;
  std::string transcript_out;
  std::string report_out;
  std::size_t discontinue_run = 0;
};

int RunScore(const ScoreArgs& args) {
  auto pool = psych::LoadItemPool(args.pool);
  if (args.discontinue_run) {
    for (auto& sub : pool.subtests) sub.discontinue_run = args.discontinue_run;
  }
  const auto norms = psych::LoadNormTable(args.norms);
  const auto replay = harness::ReplayTranscript(pool, harness::Transcript::Load(args.transcript));

  std::vector<psych::Composition> compositions;
  for (const auto& c : args.compositions) compositions.push_back(psych::Composition::Parse(c));
  if (compositions.empty()) compositions = harness::DefaultCompositions();
  const auto report = psych::BuildReport(replay.session, norms, psych::Age::Parse(args.age), compositions);
  const auto text = harness::ReportToJson(report).dump() + "\n";

  if (!args.transcript_out.empty()) replay.transcript.Save(args.transcript_out);
  if (args.report_out.empty()) {
    std::cout << text;
  } else {
    WriteFile(args.report_out, text);
  }
  return 0;
}

struct ServeArgs {
  std::string model;
  std::string listen = "127.0.0.1:8080";
  std::string state_dir = "sessions";
  std::string fixed_time;
  std::size_t discontinue_run = 0;
};

httplib::Server* g_server = nullptr;

int RunServe(const ServeArgs& args) {
  const auto model = spectral::LoadModel(harness::ResolveModelPath(args.model));
  harness::EngineConfig config;
  config.model_path = args.model;
  config.listen = args.listen;
  config.discontinue_run = args.discontinue_run;
  harness::SessionManager sessions(model, config, args.state_dir, MakeClock(args.fixed_time));

  httplib::Server server;
  harness::InstallRoutes(server, sessions);
  const auto [host, port] = harness::ParseListenAddress(args.listen);
  g_server = &server;
  std::signal(SIGINT, [](int) { g_server->stop(); });
  std::signal(SIGTERM, [](int) { g_server->stop(); });

  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
  } else if (!server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorCode::kIo, "cannot listen on " + args.listen);
  std::printf("listening on %s:%d (%zu sessions resumed)\n", host.c_str(), bound, sessions.ids().size());
  std::fflush(stdout);
  server.listen_after_bind();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"veriq: spectral commonsense answers for verbal test items"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build a model from an assertion dump");
  ingest_cmd->add_option("dump", ingest.dump, "Assertion TSV")->required();
  ingest_cmd->add_option("-o,--out", ingest.out, "Model file to write")->required();
  ingest_cmd->add_option("-k", ingest.options.svd.k, "Number of singular triplets")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  ingest_cmd->add_option("--seed", ingest.options.svd.seed, "Solver seed")->capture_default_str();
  ingest_cmd->add_option("--tolerance", ingest.options.svd.tolerance, "Relative residual tolerance")
      ->capture_default_str();
  ingest_cmd->add_option("--max-iterations", ingest.options.svd.max_iterations)->capture_default_str();
  ingest_cmd->add_option("--min-strength", ingest.options.prune.min_strength)->capture_default_str();
  ingest_cmd->add_option("--min-degree", ingest.options.prune.min_concept_degree)->capture_default_str();
  ingest_cmd->add_option("--language", ingest.options.language)->capture_default_str();
  ingest_cmd->add_option("--weighting", ingest.weighting, "sqrt or identity")
      ->capture_default_str()
      ->check(CLI::IsMember({"sqrt", "identity"}));
  ingest_cmd->add_option("--cap", ingest.options.weighting.cap, "Weight cap in sqrt mode")->capture_default_str();

  AnswerArgs answer;
  auto* answer_cmd = app.add_subcommand("answer", "Answer one item");
  answer_cmd->add_option("--model", answer.model, "Model file (default $VERIQ_MODEL)");
  answer_cmd->add_option("--kind", answer.kind, "Subtest kind")
      ->required()
      ->check(CLI::IsMember({"information", "vocabulary", "word_reasoning", "comprehension", "similarities"}));
  answer_cmd->add_option("text", answer.text, "Question, word, clues or word pair")->required();
  answer_cmd->add_flag("--json", answer.json, "Machine-readable output");
  answer_cmd->add_flag("--keep-subsumed", answer.keep_subsumed, "Keep unigrams covered by a bigram");

  BatchArgs batch;
  auto* batch_cmd = app.add_subcommand("batch", "Answer every item and clue of a pool");
  batch_cmd->add_option("--model", batch.model, "Model file (default $VERIQ_MODEL)");
  batch_cmd->add_option("--pool", batch.pool, "Item pool JSON")->required();
  batch_cmd->add_option("-o,--out", batch.out, "Transcript to write (default stdout)");
  batch_cmd->add_option("--fixed-time", batch.fixed_time, "Timestamp to stamp on every record");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Replay a scored transcript and report");
  score_cmd->add_option("transcript", score.transcript, "Scored transcript")->required();
  score_cmd->add_option("--pool", score.pool, "Item pool JSON")->required();
  score_cmd->add_option("--norms", score.norms, "Norm table CSV")->required();
  score_cmd->add_option("--age", score.age, "Age, e.g. 4y6m")->capture_default_str();
  score_cmd->add_option("--composition", score.compositions, "standard, best3, worst3 or a,b,c (repeatable)");
  score_cmd->add_option("--transcript-out", score.transcript_out, "Write the administered transcript");
  score_cmd->add_option("--report-out", score.report_out, "Write the report instead of printing it");
  score_cmd->add_option("--discontinue-run", score.discontinue_run, "Override every subtest's discontinue run");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the session HTTP API");
  serve_cmd->add_option("--model", serve.model, "Model file (default $VERIQ_MODEL)");
  serve_cmd->add_option("--listen", serve.listen, "host:port (port 0 picks one)")->capture_default_str();
  serve_cmd->add_option("--state-dir", serve.state_dir, "Session persistence directory")->capture_default_str();
  serve_cmd->add_option("--fixed-time", serve.fixed_time, "Timestamp to stamp on every record");
  serve_cmd->add_option("--discontinue-run", serve.discontinue_run, "Override every subtest's discontinue run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*ingest_cmd) return RunIngest(ingest);
    if (*answer_cmd) return RunAnswer(answer);
    if (*batch_cmd) return RunBatch(batch);
    if (*score_cmd) return RunScore(score);
    if (*serve_cmd) return RunServe(serve);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return ExitCode(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
