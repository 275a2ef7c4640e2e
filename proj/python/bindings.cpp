// Python bindings for the synchronization simulator: sequence and channel
// generation, the window statistics, trace computation, detection, and the
// experiment runners. Matrices cross the boundary as complex numpy arrays.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jass/harness.hpp"

namespace py = pybind11;
using namespace jass;

namespace {

ComplexMatrix matrix_from_numpy(const py::array_t<cplx>& arr) {
    if (arr.ndim() != 2) throw py::value_error("expected a 2-D complex array");
    auto view = arr.unchecked<2>();
    ComplexMatrix m(static_cast<std::size_t>(view.shape(0)),
                    static_cast<std::size_t>(view.shape(1)));
    for (py::ssize_t r = 0; r < view.shape(0); ++r)
        for (py::ssize_t c = 0; c < view.shape(1); ++c)
            m(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = view(r, c);
    return m;
}

py::array_t<cplx> matrix_to_numpy(const ComplexMatrix& m) {
    py::array_t<cplx> arr({m.rows(), m.cols()});
    auto view = arr.mutable_unchecked<2>();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            view(static_cast<py::ssize_t>(r), static_cast<py::ssize_t>(c)) = m(r, c);
    return arr;
}

ComplexVector vector_from_numpy(const py::array_t<cplx>& arr) {
    if (arr.ndim() != 1) throw py::value_error("expected a 1-D complex array");
    auto view = arr.unchecked<1>();
    ComplexVector v(static_cast<std::size_t>(view.shape(0)));
    for (py::ssize_t n = 0; n < view.shape(0); ++n) v[static_cast<std::size_t>(n)] = view(n);
    return v;
}

py::array_t<cplx> vector_to_numpy(const ComplexVector& v) {
    py::array_t<cplx> arr(static_cast<py::ssize_t>(v.size()));
    auto view = arr.mutable_unchecked<1>();
    for (std::size_t n = 0; n < v.size(); ++n) view(static_cast<py::ssize_t>(n)) = v[n];
    return arr;
}

SyncSequence sequence_from_numpy(const py::array_t<cplx>& values) {
    return make_sync_sequence(vector_from_numpy(values));
}

DetectorKind parse_detector(const std::string& name) {
    const auto kind = detector_kind_from_string(name);
    if (!kind) throw py::value_error("unknown detector: " + name);
    return *kind;
}

py::dict roc_result_to_dict(const RocResult& result) {
    py::dict out;
    for (std::size_t d = 0; d < result.detectors.size(); ++d) {
        py::list pts;
        for (const RocPoint& pt : result.points[d]) {
            py::dict row;
            row["alpha"] = pt.alpha;
            row["fpr"] = pt.fpr;
            row["fnr"] = pt.fnr;
            row["ter"] = pt.ter;
            pts.append(row);
        }
        out[to_string(result.detectors[d])] = pts;
    }
    out["csv_path"] = result.csv_path;
    out["meta_path"] = result.meta_path;
    return out;
}

} // namespace

PYBIND11_MODULE(_jass, m) {
    m.doc() = "Jammer-resilient uplink time synchronization simulator";

    m.def(
        "next_secret",
        [](std::uint64_t hi, std::uint64_t lo) {
            const Secret s = next_secret(Secret{hi, lo});
            return py::make_tuple(s.hi, s.lo);
        },
        py::arg("hi"), py::arg("lo"));

    m.def(
        "derive_sync_sequence",
        [](std::uint64_t hi, std::uint64_t lo, std::size_t k) {
            return vector_to_numpy(derive_sync_sequence(Secret{hi, lo}, k).values);
        },
        py::arg("hi"), py::arg("lo"), py::arg("k"));

    m.def(
        "sample_arrival",
        [](double p, std::uint64_t seed) {
            RandomStream rng(seed);
            return sample_arrival(p, rng);
        },
        py::arg("p"), py::arg("seed"));

    m.def(
        "draw_rayleigh_channel",
        [](std::size_t b, std::size_t i, std::uint64_t seed) {
            RandomStream rng(seed);
            const ChannelRealization chan = draw_rayleigh_channel(b, i, rng);
            return py::make_tuple(vector_to_numpy(chan.h), matrix_to_numpy(chan.J));
        },
        py::arg("b"), py::arg("i"), py::arg("seed"));

    m.def(
        "statistic",
        [](const std::string& kind, const py::array_t<cplx>& window,
           const py::array_t<cplx>& sequence, std::size_t i_hat, std::size_t t_max,
           std::uint64_t seed) {
            const ComplexMatrix y = matrix_from_numpy(window);
            const SyncSequence seq = sequence_from_numpy(sequence);
            switch (parse_detector(kind)) {
                case DetectorKind::jass: {
                    RandomStream rng(seed);
                    return statistic_jass(y, seq, i_hat, t_max, rng);
                }
                case DetectorKind::jass_evd: return statistic_jass_evd(y, seq, i_hat);
                case DetectorKind::bajass: {
                    RandomStream rng(seed);
                    return statistic_bajass(y, seq, i_hat, t_max, rng);
                }
                case DetectorKind::unmitigated: return statistic_unmitigated(y, seq);
                case DetectorKind::unnormalized: return statistic_unnormalized(y, seq);
            }
            throw py::value_error("unreachable detector kind");
        },
        py::arg("kind"), py::arg("window"), py::arg("sequence"), py::arg("i_hat") = 4,
        py::arg("t_max") = 4, py::arg("seed") = 0,
        "Single-window detection statistic for the given detector kind.");

    m.def(
        "metric_trace",
        [](const std::string& kind, const py::array_t<cplx>& stream,
           const py::array_t<cplx>& sequence, std::size_t i_hat, std::size_t t_max,
           std::uint64_t seed) {
            ReceiveStream rs;
            rs.samples = matrix_from_numpy(stream);
            DetectorParams params;
            params.i_hat = i_hat;
            params.t_max = t_max;
            const auto trace =
                metric_trace(rs, sequence_from_numpy(sequence), parse_detector(kind), params,
                             seed);
            return py::array_t<double>(static_cast<py::ssize_t>(trace.size()), trace.data());
        },
        py::arg("kind"), py::arg("stream"), py::arg("sequence"), py::arg("i_hat") = 4,
        py::arg("t_max") = 4, py::arg("seed") = 0,
        "Sliding-window statistic trace over a B x (L+K) receive stream.");

    m.def(
        "detect",
        [](const std::vector<double>& trace, double tau) {
            const DetectionOutcome outcome = detect(trace, tau);
            py::object where = outcome.detected_at ? py::cast(*outcome.detected_at)
                                                   : py::object(py::none());
            const char* cls = "false_negative";
            if (outcome.classification == DetectionOutcome::Classification::success)
                cls = "success";
            else if (outcome.classification == DetectionOutcome::Classification::false_positive)
                cls = "false_positive";
            return py::make_tuple(where, cls);
        },
        py::arg("trace"), py::arg("tau"),
        "First index whose statistic reaches tau, plus its classification.");

    m.def(
        "simulate_trial",
        [](const std::string& config_json, std::size_t trial_index) {
            const ExperimentConfig config = experiment_config_from_json(config_json);
            const TrialRecord rec =
                run_trial(config.scenario, config.detectors, trial_index, config.fixed_arrival);
            py::dict traces;
            for (std::size_t d = 0; d < rec.kinds.size(); ++d)
                traces[to_string(rec.kinds[d])] = py::array_t<double>(
                    static_cast<py::ssize_t>(rec.traces[d].size()), rec.traces[d].data());
            py::dict out;
            out["arrival"] = rec.arrival;
            out["seq_energy"] = rec.seq_energy;
            out["traces"] = traces;
            return out;
        },
        py::arg("config_json"), py::arg("trial_index"),
        "One deterministic Monte-Carlo trial described by an experiment config.");

    m.def(
        "run_roc",
        [](const std::string& config_json) {
            return roc_result_to_dict(run_roc_experiment(experiment_config_from_json(config_json)));
        },
        py::arg("config_json"),
        "Full ROC experiment; writes CSV + sidecar and returns the points.");

    m.def(
        "run_mismatch",
        [](const std::string& config_json, double alpha) {
            const MismatchResult res =
                run_mismatch_experiment(experiment_config_from_json(config_json), alpha);
            py::dict out;
            out["counts"] = res.counts;
            out["num_trials"] = res.num_trials;
            out["num_included"] = res.num_included;
            out["csv_path"] = res.csv_path;
            return out;
        },
        py::arg("config_json"), py::arg("alpha"),
        "Arrival-mismatch histogram at a single threshold.");

    m.attr("__version__") = "0.1.0";
}
