#include <doctest.h>

#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include <httplib.h>

#include "mewl/service.hpp"
#include "mewl/taskgen.hpp"

using namespace mewl;

namespace {

std::vector<Episode> dataset() {
  GenConfig cfg;
  cfg.global_seed = 6;
  for (auto& [t, c] : cfg.counts) c = {0, 0, 12};
  return generate_split(cfg, Split::test, {kTasks.begin(), kTasks.end()}, 1);
}

struct Running {
  StudyService service;
  int port;
  std::thread thread;
  explicit Running(std::vector<Episode> eps, ServiceOptions opts = {})
      : service(std::move(eps), std::move(opts)), port(service.bind("127.0.0.1", 0)),
        thread([this] { service.listen(); }) {
    for (int i = 0; i < 200 && !service.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~Running() {
    service.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

}  // namespace

TEST_CASE("study service end to end") {
  auto eps = dataset();
  Running srv(eps);
  auto cli = srv.client();

  auto tut = cli.Get("/api/tutorial");
  REQUIRE(tut);
  CHECK(tut->status == 200);
  CHECK(Json::parse(tut->body)["steps"].size() > 0);

  auto res = cli.Get("/api/session/new?task=relation");
  REQUIRE(res);
  REQUIRE(res->status == 200);
  auto session = Json::parse(res->body);
  CHECK(session["items"].size() == 12);
  int checks = 0;
  std::set<std::string> ids;
  for (const auto& item : session["items"]) {
    ids.insert(item["episode_id"].get<std::string>());
    if (item["attention_check"].get<bool>()) ++checks;
  }
  CHECK(checks == 2);
  CHECK(ids.size() == 12);

  for (const auto& item : session["items"]) {
    std::string id = item["episode_id"];
    auto ep = cli.Get("/api/episode/" + id);
    REQUIRE(ep);
    REQUIRE(ep->status == 200);
    auto j = Json::parse(ep->body);
    CHECK_FALSE(j.contains("answer_index"));
    CHECK_FALSE(j.contains("lexicon"));
    CHECK_FALSE(j.contains("metadata"));
    CHECK(j["task"] == "relation");
    CHECK(j["attention_check"] == item["attention_check"]);
    std::string url = j["query"]["render"];
    auto svg = cli.Get(url);
    REQUIRE(svg);
    CHECK(svg->status == 200);
    CHECK(svg->body.find("<svg") != std::string::npos);
    auto panel = cli.Get(j["contexts"][5]["render"].get<std::string>());
    REQUIRE(panel);
    CHECK(panel->status == 200);
  }

  CHECK(cli.Get("/api/episode/none")->status == 404);
  CHECK(cli.Get("/render/test-shape-00000/7.svg")->status == 404);
  CHECK(cli.Get("/api/session/new?task=dance")->status == 400);

  // Post oracle answers for the whole session.
  std::map<std::string, const Episode*> by_id;
  for (const auto& e : eps) by_id[e.episode_id] = &e;
  for (const auto& item : session["items"]) {
    std::string id = item["episode_id"];
    Episode ep = item["attention_check"].get<bool>() ? attention_check_for(*by_id.at(id.substr(0, id.size() - 3)))
                                                      : *by_id.at(id);
    AnswerRecord a{id, ep.answer_index, "p1", 1500, false};
    auto post = cli.Post("/api/answer", answer_to_json(a).dump(), "application/json");
    REQUIRE(post);
    CHECK(post->status == 204);
  }
  auto report = Json::parse(cli.Get("/api/report?agent=p1")->body);
  CHECK(report["per_task"]["relation"]["accuracy"] == 1.0);
  CHECK(report["per_task"]["relation"]["attempted"] == 10);
  CHECK(report["attention_checks"] == 2);
  CHECK(report["attention_pass"] == true);
  CHECK(srv.service.answers().size() == 12);

  CHECK(cli.Post("/api/answer", "{oops", "application/json")->status == 400);
  CHECK(cli.Post("/api/answer", R"({"episode_id":"test-shape-00000","chosen_index":9,"agent_id":"p"})", "application/json")->status == 400);
  CHECK(cli.Post("/api/answer", R"({"episode_id":"zzz","chosen_index":1,"agent_id":"p"})", "application/json")->status == 404);
  CHECK(cli.Get("/api/report")->status == 400);
}

TEST_CASE("concurrent posters lose no records") {
  auto eps = dataset();
  auto log = std::filesystem::temp_directory_path() / ("mewl-answers-" + std::to_string(::getpid()) + ".jsonl");
  std::filesystem::remove(log);
  ServiceOptions opts;
  opts.answer_log = log;
  {
    Running srv(eps, opts);
    constexpr int kPosters = 20, kEach = 25;
    std::atomic<int> accepted{0};
    std::mutex mu;
    std::vector<std::string> errors;
    std::vector<std::thread> threads;
    for (int p = 0; p < kPosters; ++p) {
      threads.emplace_back([&, p] {
        auto cli = srv.client();
        for (int i = 0; i < kEach; ++i) {
          const auto& ep = eps[static_cast<std::size_t>((p * kEach + i) % static_cast<int>(eps.size()))];
          AnswerRecord a{ep.episode_id, ep.answer_index, "agent-" + std::to_string(p), i, false};
          auto r = cli.Post("/api/answer", answer_to_json(a).dump(), "application/json");
          if (r && r->status == 204) {
            ++accepted;
          } else {
            std::lock_guard lock(mu);
            errors.push_back(r ? std::to_string(r->status) : httplib::to_string(r.error()));
          }
        }
      });
    }
    for (auto& t : threads) t.join();
    CHECK(errors.empty());
    if (!errors.empty()) MESSAGE("first error: ", errors.front());
    CHECK(accepted == kPosters * kEach);
    CHECK(srv.service.answers().size() == kPosters * kEach);
  }
  auto logged = read_answers(log);
  CHECK(logged.size() == 500);
  std::filesystem::remove(log);
}

TEST_CASE("attention check ids derive from their base") {
  auto eps = dataset();
  CHECK(attention_check_id("a") == "a-ac");
  auto one = attention_check_for(eps[0]);
  CHECK(one == attention_check_for(eps[0]));
  CHECK(one.episode_id == eps[0].episode_id + "-ac");
}
