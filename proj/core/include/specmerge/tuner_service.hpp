#pragma once

#include <memory>
#include <string>

namespace specmerge {

/// HTTP front end for interactive tuning of prominence coefficients and the
/// threshold fraction. Sessions live in memory; every GET recomputes the
/// merge from the session's current images and parameters.
///
///   POST   /sessions                    -> {"id"}
///   POST   /sessions/{id}/images        PGM body -> {"index", "rows", "cols"}
///   PUT    /sessions/{id}/params        {"coeffs", "threshold_frac", "renorm", "align", "pad_value"}
///   GET    /sessions/{id}/merged.pgm
///   GET    /sessions/{id}/spectrum.pgm  heatmap of the unthresholded merged spectrum
///   GET    /sessions/{id}/report        ReductionReport JSON
///   DELETE /sessions/{id}               -> 204
class TunerService {
public:
    TunerService();
    ~TunerService();

    TunerService(const TunerService&) = delete;
    TunerService& operator=(const TunerService&) = delete;

    /// Binds and serves until stop(). Returns false if the bind failed.
    bool listen(const std::string& host, int port);

    /// Binds to an ephemeral port and returns it (or -1). Follow with
    /// listen_after_bind() to serve.
    int bind_to_any_port(const std::string& host);
    bool listen_after_bind();

    void stop();
    void wait_until_ready() const;

    std::size_t session_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace specmerge
