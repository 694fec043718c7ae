#include "mewl/service.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <unordered_map>

#include <httplib.h>

#include "mewl/render.hpp"
#include "mewl/rng.hpp"
#include "mewl/taskgen.hpp"

namespace mewl {
namespace {

constexpr std::string_view kAcSuffix = "-ac";

const char* kTutorial = R"({
  "title": "How the naming game works",
  "source": "written for this toolkit; not the original study wording",
  "steps": [
    "Each question shows six pictures. Under every picture is a name made of made-up words.",
    "The made-up words always mean the same thing within one question, and two different words never mean the same thing.",
    "Work out what each word refers to by comparing the pictures.",
    "The seventh picture has no name. Pick the one of five names that fits it.",
    "Some questions repeat one of the six pictures exactly. Answer those carefully too."
  ]
})";

void json_reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void error_reply(httplib::Response& res, int status, const std::string& message) {
  json_reply(res, status, Json{{"error", message}});
}

}  // namespace

std::string attention_check_id(const std::string& base_id) { return base_id + std::string(kAcSuffix); }

Episode attention_check_for(const Episode& base) {
  Rng rng(mix_seed(base.seed, "attention-check:" + base.episode_id, 0));
  return gen_attention_check(base, rng);
}

Json public_episode_json(const Episode& ep) {
  Json full = episode_to_json(ep);
  Json out = Json::object();
  out["episode_id"] = ep.episode_id;
  out["task"] = full["task"];
  out["attention_check"] = ep.is_attention_check();
  Json contexts = Json::array();
  for (std::size_t i = 0; i < ep.contexts.size(); ++i) {
    Json panel = full["contexts"][i];
    panel["render"] = "/render/" + ep.episode_id + "/" + std::to_string(i) + ".svg";
    contexts.push_back(std::move(panel));
  }
  out["contexts"] = std::move(contexts);
  out["query"] = {{"scene", full["query"]}, {"render", "/render/" + ep.episode_id + "/query.svg"}};
  out["options"] = full["options"];
  return out;
}

struct StudyService::Impl {
  std::vector<Episode> dataset;
  std::unordered_map<std::string, std::size_t> index;
  std::map<Task, std::vector<std::size_t>> by_task;
  ServiceOptions options;

  std::mutex derived_mu;
  std::unordered_map<std::string, std::shared_ptr<const Episode>> checks;
  std::unordered_map<std::string, std::string> renders;

  mutable std::mutex log_mu;
  std::vector<AnswerRecord> log;
  std::ofstream log_file;

  std::atomic<std::uint64_t> sessions{0};
  httplib::Server server;

  Impl(std::vector<Episode> episodes, ServiceOptions opts)
      : dataset(std::move(episodes)), options(std::move(opts)) {
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      index.emplace(dataset[i].episode_id, i);
      if (!dataset[i].is_attention_check()) by_task[dataset[i].task].push_back(i);
    }
    if (options.answer_log) {
      log_file.open(*options.answer_log, std::ios::app);
      if (!log_file) throw IoError("cannot open answer log " + options.answer_log->string());
    }
    routes();
  }

  // Dataset episodes plus lazily derived attention checks.
  std::shared_ptr<const Episode> find(const std::string& id) {
    if (auto it = index.find(id); it != index.end()) {
      return std::shared_ptr<const Episode>(std::shared_ptr<void>{}, &dataset[it->second]);
    }
    if (!id.ends_with(kAcSuffix)) return nullptr;
    auto base = index.find(id.substr(0, id.size() - kAcSuffix.size()));
    if (base == index.end()) return nullptr;
    std::lock_guard lock(derived_mu);
    auto& slot = checks[id];
    if (!slot) slot = std::make_shared<const Episode>(attention_check_for(dataset[base->second]));
    return slot;
  }

  Json new_session(Task task) {
    auto pool_it = by_task.find(task);
    if (pool_it == by_task.end() || pool_it->second.empty()) {
      throw UnknownEpisodeId(std::string("no episodes for task ") + std::string(task_name(task)));
    }
    const std::uint64_t n = sessions.fetch_add(1);
    Rng rng(mix_seed(options.seed, "session", n));
    const auto& pool = pool_it->second;
    const auto picks = rng.sample_indices(pool.size(), std::min<std::size_t>(kSessionQuestions, pool.size()));

    std::vector<std::pair<std::string, bool>> items;
    for (auto p : picks) items.emplace_back(dataset[pool[p]].episode_id, false);
    const auto check_sources = rng.sample_indices(picks.size(), std::min<std::size_t>(kSessionAttentionChecks, picks.size()));
    for (auto c : check_sources) {
      std::string id = attention_check_id(items[c].first);
      find(id);
      std::size_t at = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(items.size())));
      items.insert(items.begin() + static_cast<std::ptrdiff_t>(at), {id, true});
    }

    Json list = Json::array();
    for (const auto& [id, check] : items) list.push_back({{"episode_id", id}, {"attention_check", check}});
    char sid[32];
    std::snprintf(sid, sizeof sid, "s%06llu", static_cast<unsigned long long>(n));
    return {{"session_id", sid}, {"task", task_name(task)}, {"items", std::move(list)}};
  }

  std::string render(const Episode& ep, const std::string& panel) {
    const std::string key = ep.episode_id + "/" + panel;
    {
      std::lock_guard lock(derived_mu);
      if (auto it = renders.find(key); it != renders.end()) return it->second;
    }
    const Scene* scene = nullptr;
    if (panel == "query") {
      scene = &ep.query;
    } else if (panel.size() == 1 && panel[0] >= '0' && panel[0] < '0' + kContextCount) {
      scene = &ep.contexts[static_cast<std::size_t>(panel[0] - '0')].scene;
    } else {
      return {};
    }
    std::string svg = render_svg(*scene);
    std::lock_guard lock(derived_mu);
    return renders.emplace(key, std::move(svg)).first->second;
  }

  void record(AnswerRecord a) {
    std::lock_guard lock(log_mu);
    if (log_file.is_open()) {
      log_file << answer_to_json(a).dump() << '\n';
      log_file.flush();
    }
    log.push_back(std::move(a));
  }

  EvalReport report(const std::string& agent) {
    std::vector<AnswerRecord> snapshot;
    {
      std::lock_guard lock(log_mu);
      snapshot = log;
    }
    std::vector<Episode> episodes = dataset;
    {
      std::lock_guard lock(derived_mu);
      for (const auto& [id, ep] : checks) episodes.push_back(*ep);
    }
    return evaluate(episodes, snapshot, agent);
  }

  void routes() {
    server.Get("/api/tutorial", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kTutorial, "application/json; charset=utf-8");
    });

    server.Get("/api/session/new", [this](const httplib::Request& req, httplib::Response& res) {
      auto task = parse_task(req.get_param_value("task"));
      if (!task) return error_reply(res, 400, "missing or unknown task");
      try {
        json_reply(res, 200, new_session(*task));
      } catch (const UnknownEpisodeId& e) {
        error_reply(res, 404, e.what());
      }
    });

    server.Get(R"(/api/episode/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto ep = find(req.matches[1]);
      if (!ep) return error_reply(res, 404, "unknown episode id");
      json_reply(res, 200, public_episode_json(*ep));
    });

    server.Get(R"(/render/([^/]+)/([^/]+)\.svg)", [this](const httplib::Request& req, httplib::Response& res) {
      auto ep = find(req.matches[1]);
      if (!ep) return error_reply(res, 404, "unknown episode id");
      std::string svg = render(*ep, req.matches[2]);
      if (svg.empty()) return error_reply(res, 404, "unknown panel");
      res.set_content(svg, "image/svg+xml; charset=utf-8");
    });

    server.Post("/api/answer", [this](const httplib::Request& req, httplib::Response& res) {
      AnswerRecord a;
      try {
        a = answer_from_json(Json::parse(req.body));
      } catch (const std::exception& e) {
        return error_reply(res, 400, e.what());
      }
      auto ep = find(a.episode_id);
      if (!ep) return error_reply(res, 404, "unknown episode id");
      a.is_attention_check = a.is_attention_check || ep->is_attention_check();
      record(std::move(a));
      res.status = 204;
    });

    server.Get("/api/report", [this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("agent")) return error_reply(res, 400, "missing agent");
      try {
        json_reply(res, 200, report_to_json(report(req.get_param_value("agent"))));
      } catch (const UnknownEpisodeId& e) {
        error_reply(res, 404, e.what());
      }
    });
  }
};

StudyService::StudyService(std::vector<Episode> dataset, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(dataset), std::move(options))) {}

StudyService::~StudyService() { stop(); }

int StudyService::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void StudyService::listen() { impl_->server.listen_after_bind(); }

void StudyService::stop() {
  if (impl_) impl_->server.stop();
}

bool StudyService::running() const { return impl_->server.is_running(); }

std::vector<AnswerRecord> StudyService::answers() const {
  std::lock_guard lock(impl_->log_mu);
  return impl_->log;
}

void serve(std::vector<Episode> dataset, const std::string& bind_address, ServiceOptions options) {
  auto colon = bind_address.rfind(':');
  if (colon == std::string::npos) throw PreconditionError("bind address must be host:port");
  std::string host = bind_address.substr(0, colon);
  if (host.empty()) host = "0.0.0.0";
  int port = 0;
  try {
    port = std::stoi(bind_address.substr(colon + 1));
  } catch (const std::exception&) {
    throw PreconditionError("bad port in bind address '" + bind_address + "'");
  }
  StudyService service(std::move(dataset), std::move(options));
  service.bind(host, port);
  service.listen();
}

}  // namespace mewl
