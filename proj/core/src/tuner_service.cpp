#include "specmerge/tuner_service.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "specmerge/json_format.hpp"
#include "specmerge/merge.hpp"
#include "specmerge/pgm.hpp"

namespace specmerge {

namespace {

using nlohmann::json;

constexpr const char* kPgmType = "application/octet-stream";
constexpr const char* kJsonType = "application/json";

// One immutable snapshot of a session. Mutations publish a new snapshot,
// so readers always see either the old or the new state in full.
struct SessionState {
    std::vector<ImagePlane> planes;
    MergeConfig params;
    std::optional<ReductionReport> last_report;
};

struct Session {
    std::mutex mutex;
    std::shared_ptr<const SessionState> state = std::make_shared<SessionState>();

    std::shared_ptr<const SessionState> snapshot() {
        std::lock_guard lock(mutex);
        return state;
    }
};

struct BadRequest {
    std::string field;
    std::string message;
};

std::string new_session_id() {
    static std::mutex mutex;
    static std::mt19937_64 engine{std::random_device{}()};
    std::lock_guard lock(mutex);
    std::ostringstream id;
    id << std::hex << std::setfill('0') << std::setw(16) << engine() << std::setw(16) << engine();
    return id.str();
}

void send_error(httplib::Response& res, int status, const std::string& message, const std::string& field = {}) {
    json body = {{"error", message}};
    if (!field.empty()) body["field"] = field;
    res.status = status;
    res.set_content(body.dump(), kJsonType);
}

json params_to_json(const MergeConfig& params) {
    return {
        {"coeffs", params.coefficients},
        {"threshold_frac", params.threshold_fraction},
        {"renorm", std::string(renorm_name(params.renorm))},
        {"align", std::string(align_mode_name(params.alignment.mode))},
        {"pad_value", params.alignment.pad_value},
    };
}

// Absent fields fall back to defaults: a PUT replaces the whole parameter
// set rather than patching it.
MergeConfig params_from_json(const json& body, std::size_t image_count) {
    if (!body.is_object()) throw BadRequest{"", "params body must be a JSON object"};
    MergeConfig params;

    if (body.contains("coeffs")) {
        const json& coeffs = body.at("coeffs");
        if (!coeffs.is_array()) throw BadRequest{"coeffs", "coeffs must be an array of numbers"};
        for (const json& a : coeffs) {
            if (!a.is_number() || !std::isfinite(a.get<double>())) {
                throw BadRequest{"coeffs", "coeffs must contain finite numbers"};
            }
            params.coefficients.push_back(a.get<double>());
        }
        if (params.coefficients.size() != image_count) {
            throw BadRequest{"coeffs", "expected " + std::to_string(image_count) + " coefficients (one per image), got " +
                                           std::to_string(params.coefficients.size())};
        }
    } else {
        params.coefficients.assign(image_count, 1.0);
    }

    if (body.contains("threshold_frac")) {
        const json& x = body.at("threshold_frac");
        if (!x.is_number()) throw BadRequest{"threshold_frac", "threshold_frac must be a number"};
        params.threshold_fraction = x.get<double>();
        if (!(params.threshold_fraction >= 0.0 && params.threshold_fraction < 1.0)) {
            throw BadRequest{"threshold_frac", "threshold_frac must be in [0, 1)"};
        }
    }

    if (body.contains("renorm")) {
        const json& r = body.at("renorm");
        const auto policy = r.is_string() ? renorm_from_name(r.get<std::string>()) : std::nullopt;
        if (!policy) throw BadRequest{"renorm", "renorm must be \"divide_by_max\" or \"clamp\""};
        params.renorm = *policy;
    }

    if (body.contains("align")) {
        const json& a = body.at("align");
        const auto mode = a.is_string() ? align_mode_from_name(a.get<std::string>()) : std::nullopt;
        if (!mode) throw BadRequest{"align", "align must be \"center_pad\" or \"topleft_pad\""};
        params.alignment.mode = *mode;
    }

    if (body.contains("pad_value")) {
        const json& p = body.at("pad_value");
        if (!p.is_number()) throw BadRequest{"pad_value", "pad_value must be a number"};
        params.alignment.pad_value = p.get<double>();
        if (!(params.alignment.pad_value >= 0.0 && params.alignment.pad_value <= 1.0)) {
            throw BadRequest{"pad_value", "pad_value must be within [0, 1]"};
        }
    }
    return params;
}

}  // namespace

struct TunerService::Impl {
    httplib::Server server;
    mutable std::mutex sessions_mutex;
    std::unordered_map<std::string, std::shared_ptr<Session>> sessions;

    Impl() { install_routes(); }

    std::shared_ptr<Session> find(const std::string& id) {
        std::lock_guard lock(sessions_mutex);
        const auto it = sessions.find(id);
        return it == sessions.end() ? nullptr : it->second;
    }

    // Runs `fn` with the named session or answers 404.
    template <typename Fn>
    void with_session(const httplib::Request& req, httplib::Response& res, Fn&& fn) {
        const std::shared_ptr<Session> session = find(req.matches[1]);
        if (!session) {
            send_error(res, 404, "unknown session " + std::string(req.matches[1]));
            return;
        }
        fn(*session);
    }

    // Merges the snapshot and records the report if the session has not
    // moved on in the meantime.
    static std::optional<SpectralMerge> merge_snapshot(Session& session, httplib::Response& res) {
        const auto state = session.snapshot();
        if (state->planes.empty()) {
            send_error(res, 400, "session has no images; upload a PGM first");
            return std::nullopt;
        }
        SpectralMerge result = merge_spectral(state->planes, state->params);

        std::lock_guard lock(session.mutex);
        if (session.state == state) {
            auto next = std::make_shared<SessionState>(*state);
            next->last_report = result.report;
            session.state = std::move(next);
        }
        return result;
    }

    void install_routes() {
        server.set_default_headers({
            {"Access-Control-Allow-Origin", "*"},
            {"Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS"},
            {"Access-Control-Allow-Headers", "Content-Type"},
        });

        server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                send_error(res, 500, e.what());
            } catch (...) {
                send_error(res, 500, "unknown error");
            }
        });

        server.Post("/sessions", [this](const httplib::Request&, httplib::Response& res) {
            const std::string id = new_session_id();
            {
                std::lock_guard lock(sessions_mutex);
                sessions.emplace(id, std::make_shared<Session>());
            }
            res.status = 201;
            res.set_content(json{{"id", id}}.dump(), kJsonType);
        });

        server.Post(R"(/sessions/([0-9a-f]+)/images)", [this](const httplib::Request& req, httplib::Response& res) {
            with_session(req, res, [&](Session& session) {
                ImagePlane plane;
                try {
                    const auto* data = reinterpret_cast<const std::uint8_t*>(req.body.data());
                    plane = read_pgm({data, req.body.size()});
                } catch (const std::exception& e) {
                    send_error(res, 400, std::string("malformed PGM upload: ") + e.what(), "body");
                    return;
                }
                std::size_t index = 0;
                {
                    std::lock_guard lock(session.mutex);
                    auto next = std::make_shared<SessionState>(*session.state);
                    next->planes.push_back(plane);
                    if (next->params.coefficients.size() < next->planes.size()) {
                        next->params.coefficients.resize(next->planes.size(), 1.0);
                    }
                    next->last_report.reset();
                    index = next->planes.size() - 1;
                    session.state = std::move(next);
                }
                res.status = 201;
                res.set_content(json{{"index", index}, {"rows", plane.rows()}, {"cols", plane.cols()}}.dump(),
                                kJsonType);
            });
        });

        server.Put(R"(/sessions/([0-9a-f]+)/params)", [this](const httplib::Request& req, httplib::Response& res) {
            with_session(req, res, [&](Session& session) {
                const json body = json::parse(req.body, nullptr, false);
                if (body.is_discarded()) {
                    send_error(res, 400, "params body is not valid JSON", "body");
                    return;
                }
                // Validate against the plane count under the lock so an upload
                // cannot slip in between the check and the swap.
                std::lock_guard lock(session.mutex);
                MergeConfig params;
                try {
                    params = params_from_json(body, session.state->planes.size());
                } catch (const BadRequest& bad) {
                    send_error(res, 400, bad.message, bad.field);
                    return;
                }
                auto next = std::make_shared<SessionState>(*session.state);
                next->params = params;
                next->last_report.reset();
                session.state = std::move(next);
                res.set_content(params_to_json(params).dump(), kJsonType);
            });
        });

        server.Get(R"(/sessions/([0-9a-f]+)/merged\.pgm)", [this](const httplib::Request& req, httplib::Response& res) {
            with_session(req, res, [&](Session& session) {
                if (const auto result = merge_snapshot(session, res)) {
                    const std::vector<std::uint8_t> pgm = write_pgm(result->merged);
                    res.set_content(std::string(pgm.begin(), pgm.end()), kPgmType);
                }
            });
        });

        server.Get(R"(/sessions/([0-9a-f]+)/spectrum\.pgm)",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       with_session(req, res, [&](Session& session) {
                           const auto state = session.snapshot();
                           if (state->planes.empty()) {
                               send_error(res, 400, "session has no images; upload a PGM first");
                               return;
                           }
                           const ComplexSpectrum spectrum = integrate_spectra(state->planes, state->params);
                           const std::vector<std::uint8_t> pgm = write_pgm(spectrum_heatmap(spectrum));
                           res.set_content(std::string(pgm.begin(), pgm.end()), kPgmType);
                       });
                   });

        server.Get(R"(/sessions/([0-9a-f]+)/report)", [this](const httplib::Request& req, httplib::Response& res) {
            with_session(req, res, [&](Session& session) {
                if (const auto result = merge_snapshot(session, res)) {
                    res.set_content(report_to_json(result->report), kJsonType);
                }
            });
        });

        server.Delete(R"(/sessions/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
            std::lock_guard lock(sessions_mutex);
            if (sessions.erase(req.matches[1]) == 0) {
                send_error(res, 404, "unknown session " + std::string(req.matches[1]));
                return;
            }
            res.status = 204;
        });
    }
};

TunerService::TunerService() : impl_(std::make_unique<Impl>()) {}

TunerService::~TunerService() { stop(); }

bool TunerService::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int TunerService::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool TunerService::listen_after_bind() { return impl_->server.listen_after_bind(); }

void TunerService::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void TunerService::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::size_t TunerService::session_count() const {
    std::lock_guard lock(impl_->sessions_mutex);
    return impl_->sessions.size();
}

}  // namespace specmerge
