#include "nykpca/kpca.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "nykpca/numerics.hpp"

namespace nykpca {

namespace {

int effective_rank(const Vec& eigvals, double floor) {
    int rank = 0;
    for (Index i = 0; i < eigvals.size(); ++i)
        if (eigvals[i] > floor) ++rank;
    return rank;
}

void require_retainable(const Vec& eigvals, int ell, double floor, const char* what) {
    const int rank = effective_rank(eigvals, floor);
    if (ell > rank)
        throw UsageError(std::string(what) + ": requested ell=" + std::to_string(ell) +
                         " exceeds the effective rank " + std::to_string(rank) +
                         " (components at or below the eigenvalue floor are not retainable)");
}

}  // namespace

EkpcaModel fit_ekpca(const Dataset& data, const KernelSpec& spec, int ell) {
    data.validate();
    spec.validate();
    const Index n = data.n();
    if (ell < 1 || ell > n) throw UsageError("fit_ekpca: need 1 <= ell <= n");

    Mat k = gram_self(spec, data.x);
    EigenDecomposition ed = sym_eig(k);  // eigenvalues of K; divide by n for (1/n) K

    EkpcaModel model;
    model.all_eigvals = ed.values / static_cast<double>(n);
    model.trace_over_n = k.trace() / static_cast<double>(n);

    require_retainable(model.all_eigvals, ell, default_floor(model.trace_over_n), "fit_ekpca");

    model.ell = ell;
    model.eigvals = model.all_eigvals.head(ell);
    model.alphas.resize(n, ell);
    for (int i = 0; i < ell; ++i)
        model.alphas.col(i) = ed.vectors.col(i) / std::sqrt(ed.values[i]);  // u_i / sqrt(n lambda_i)
    model.train = data;
    model.spec = spec;
    return model;
}

NystromModel fit_nystrom(const Dataset& data, const KernelSpec& spec,
                         const LandmarkSet& landmarks, int ell) {
    data.validate();
    spec.validate();
    const Index n = data.n();
    const int m = landmarks.m_distinct();
    if (m < 1) throw UsageError("fit_nystrom: empty landmark set");
    for (int idx : landmarks.distinct)
        if (idx < 0 || idx >= n)
            throw UsageError("fit_nystrom: landmark index " + std::to_string(idx) +
                             " outside [0, n)");
    if (ell < 1 || ell > m)
        throw UsageError("fit_nystrom: need 1 <= ell <= m_distinct (= " + std::to_string(m) + ")");

    NystromModel model;
    model.landmarks.resize(m, data.dim());
    for (int i = 0; i < m; ++i)
        model.landmarks.row(i) = data.x.row(landmarks.distinct[static_cast<size_t>(i)]);

    Mat k_mm = gram_self(spec, model.landmarks);
    InvSqrtPsd r = inv_sqrt_psd(k_mm, default_floor(k_mm.trace()));

    // M = R K_mn K_nm R = (K_nm R)^T (K_nm R); built as a Gram product so it
    // is exactly symmetric PSD. Only n x m blocks are ever live.
    Mat b = gram(spec, data.x, model.landmarks) * r.matrix;
    Mat m_mat(m, m);
    m_mat.setZero();
    m_mat.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose(), 1.0 / static_cast<double>(n));
    m_mat.triangularView<Eigen::Upper>() = m_mat.transpose();
    b.resize(0, 0);

    EigenDecomposition ed = sym_eig(m_mat);  // spectrum of (1/n) M directly

    model.trace_over_n = mean_kernel_diag(spec, data.x);
    require_retainable(ed.values, ell, default_floor(model.trace_over_n), "fit_nystrom");

    model.ell = ell;
    model.m_distinct = m;
    model.all_eigvals_m = ed.values;
    model.eigvals_m = ed.values.head(ell);
    model.betas = r.matrix * ed.vectors.leftCols(ell);
    model.spec = spec;
    model.scheme = landmarks.scheme;
    model.seed = landmarks.seed;
    return model;
}

Mat project_ekpca(const EkpcaModel& model, const RowMat& points) {
    if (points.cols() != model.train.dim())
        throw UsageError("project_ekpca: point dimension " + std::to_string(points.cols()) +
                         " does not match training dimension " + std::to_string(model.train.dim()));
    return gram(model.spec, points, model.train.x) * model.alphas;
}

Mat project_nystrom(const NystromModel& model, const RowMat& points) {
    if (points.cols() != model.landmarks.cols())
        throw UsageError("project_nystrom: point dimension " + std::to_string(points.cols()) +
                         " does not match landmark dimension " +
                         std::to_string(model.landmarks.cols()));
    return gram(model.spec, points, model.landmarks) * model.betas;
}

double recon_error_ekpca_at(const EkpcaModel& model, int ell) {
    const Index n = model.all_eigvals.size();
    if (ell < 0 || ell > n) throw UsageError("recon_error_ekpca: need 0 <= ell <= n");
    double tail = 0.0;
    for (Index i = ell; i < n; ++i) tail += model.all_eigvals[i];
    return tail;
}

double recon_error_ekpca(const EkpcaModel& model) { return recon_error_ekpca_at(model, model.ell); }

double recon_error_nystrom_at(const NystromModel& model, int ell) {
    const Index m = model.all_eigvals_m.size();
    if (ell < 0 || ell > m) throw UsageError("recon_error_nystrom: need 0 <= ell <= m_distinct");
    double head = 0.0;
    for (Index i = 0; i < ell; ++i) head += model.all_eigvals_m[i];
    return model.trace_over_n - head;
}

double recon_error_nystrom(const NystromModel& model) {
    return recon_error_nystrom_at(model, model.ell);
}

double recon_error_oracle(const Dataset& data, const KernelSpec& spec, const Mat& coeffs,
                          const RowMat& basis_points) {
    data.validate();
    spec.validate();
    if (coeffs.cols() > 0) {
        if (coeffs.rows() != basis_points.rows())
            throw UsageError("recon_error_oracle: coefficient rows do not match basis points");
        Mat k_bb = gram_self(spec, basis_points);
        Mat g = coeffs.transpose() * k_bb * coeffs;
        const double dev = (g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
        if (dev > 1e-6)
            throw UsageError("recon_error_oracle: basis not orthonormal in the RKHS (deviation " +
                             std::to_string(dev) + ")");
    }

    const Index n = data.n();
    double total = 0.0;
    for (Index i = 0; i < n; ++i) total += kernel_diag(spec, data.x.row(i).transpose());
    if (coeffs.cols() > 0) {
        Mat scores = gram(spec, data.x, basis_points) * coeffs;  // f_j(X_i)
        total -= scores.squaredNorm();
    }
    return total / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// persistence: "NYKPCA1\0" magic, then a JSON header (kernel, provenance,
// shapes), then raw little-endian f64 arrays in a fixed order.

namespace {

constexpr char kMagic[8] = {'N', 'Y', 'K', 'P', 'C', 'A', '1', '\0'};

void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw FormatError("model file: truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void write_array(std::ostream& os, const double* data, std::uint64_t count) {
    write_u64(os, count);
    os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 8));
}

void read_array(std::istream& is, double* data, std::uint64_t expected) {
    const std::uint64_t count = read_u64(is);
    if (count != expected)
        throw FormatError("model file: array length " + std::to_string(count) +
                          " does not match header (" + std::to_string(expected) + ")");
    is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * 8));
    if (!is) throw FormatError("model file: truncated array payload");
}

nlohmann::json kernel_to_json(const KernelSpec& spec) {
    nlohmann::json j;
    j["family"] = spec.name();
    if (spec.family == KernelFamily::Gaussian) j["sigma"] = spec.sigma;
    if (spec.family == KernelFamily::Polynomial) {
        j["degree"] = spec.degree;
        j["offset"] = spec.offset;
    }
    return j;
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
    KernelSpec spec;
    const std::string family = j.at("family").get<std::string>();
    if (family == "gaussian") {
        spec.family = KernelFamily::Gaussian;
        spec.sigma = j.at("sigma").get<double>();
    } else if (family == "linear") {
        spec.family = KernelFamily::Linear;
    } else if (family == "polynomial") {
        spec.family = KernelFamily::Polynomial;
        spec.degree = j.at("degree").get<int>();
        spec.offset = j.at("offset").get<double>();
    } else {
        throw FormatError("model file: unknown kernel family '" + family + "'");
    }
    spec.validate();
    return spec;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw UsageError("cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw UsageError("cannot open '" + path + "' for reading");
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw FormatError("model file: bad magic at offset 0");
    return is;
}

void write_header(std::ostream& os, const nlohmann::json& meta) {
    os.write(kMagic, 8);
    const std::string text = meta.dump();
    write_u64(os, text.size());
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
}

nlohmann::json read_header(std::istream& is) {
    const std::uint64_t len = read_u64(is);
    std::string text(len, '\0');
    is.read(text.data(), static_cast<std::streamsize>(len));
    if (!is) throw FormatError("model file: truncated JSON header");
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model file: bad JSON header: ") + e.what());
    }
}

const char* scheme_name(SamplingScheme s) {
    return s == SamplingScheme::PlainUniform ? "uniform" : "als";
}

}  // namespace

void save_ekpca(const EkpcaModel& model, const std::string& path) {
    auto os = open_out(path);
    nlohmann::json meta;
    meta["model"] = "ekpca";
    meta["kernel"] = kernel_to_json(model.spec);
    meta["ell"] = model.ell;
    meta["n"] = model.train.n();
    meta["d"] = model.train.dim();
    meta["trace_over_n"] = model.trace_over_n;
    meta["eigenvalue_floor"] = default_floor(model.trace_over_n);
    meta["has_labels"] = model.train.labels.has_value();
    write_header(os, meta);
    const auto n = static_cast<std::uint64_t>(model.train.n());
    const auto d = static_cast<std::uint64_t>(model.train.dim());
    write_array(os, model.train.x.data(), n * d);
    write_array(os, model.all_eigvals.data(), n);
    write_array(os, model.alphas.data(), n * static_cast<std::uint64_t>(model.ell));
    if (model.train.labels) {
        Vec labels(model.train.n());
        for (Index i = 0; i < model.train.n(); ++i)
            labels[i] = static_cast<double>((*model.train.labels)[static_cast<size_t>(i)]);
        write_array(os, labels.data(), n);
    }
    if (!os) throw UsageError("failed writing model to '" + path + "'");
}

EkpcaModel load_ekpca(const std::string& path) {
    auto is = open_in(path);
    const nlohmann::json meta = read_header(is);
    if (meta.value("model", "") != "ekpca")
        throw FormatError("model file: expected an ekpca model, found '" +
                          meta.value("model", "?") + "'");
    EkpcaModel model;
    model.spec = kernel_from_json(meta.at("kernel"));
    model.ell = meta.at("ell").get<int>();
    const auto n = meta.at("n").get<std::uint64_t>();
    const auto d = meta.at("d").get<std::uint64_t>();
    model.trace_over_n = meta.at("trace_over_n").get<double>();
    model.train.x.resize(static_cast<Index>(n), static_cast<Index>(d));
    read_array(is, model.train.x.data(), n * d);
    model.all_eigvals.resize(static_cast<Index>(n));
    read_array(is, model.all_eigvals.data(), n);
    model.alphas.resize(static_cast<Index>(n), model.ell);
    read_array(is, model.alphas.data(), n * static_cast<std::uint64_t>(model.ell));
    if (meta.value("has_labels", false)) {
        Vec labels(static_cast<Index>(n));
        read_array(is, labels.data(), n);
        std::vector<int> l(n);
        for (std::uint64_t i = 0; i < n; ++i) l[i] = static_cast<int>(labels[static_cast<Index>(i)]);
        model.train.labels = std::move(l);
    }
    model.eigvals = model.all_eigvals.head(model.ell);
    return model;
}

void save_nystrom(const NystromModel& model, const std::string& path) {
    auto os = open_out(path);
    nlohmann::json meta;
    meta["model"] = "nystrom";
    meta["kernel"] = kernel_to_json(model.spec);
    meta["ell"] = model.ell;
    meta["m_distinct"] = model.m_distinct;
    meta["d"] = model.landmarks.cols();
    meta["trace_over_n"] = model.trace_over_n;
    meta["eigenvalue_floor"] = default_floor(model.trace_over_n);
    meta["scheme"] = scheme_name(model.scheme);
    meta["seed"] = model.seed;
    write_header(os, meta);
    const auto m = static_cast<std::uint64_t>(model.m_distinct);
    const auto d = static_cast<std::uint64_t>(model.landmarks.cols());
    write_array(os, model.landmarks.data(), m * d);
    write_array(os, model.all_eigvals_m.data(), m);
    write_array(os, model.betas.data(), m * static_cast<std::uint64_t>(model.ell));
    if (!os) throw UsageError("failed writing model to '" + path + "'");
}

NystromModel load_nystrom(const std::string& path) {
    auto is = open_in(path);
    const nlohmann::json meta = read_header(is);
    if (meta.value("model", "") != "nystrom")
        throw FormatError("model file: expected a nystrom model, found '" +
                          meta.value("model", "?") + "'");
    NystromModel model;
    model.spec = kernel_from_json(meta.at("kernel"));
    model.ell = meta.at("ell").get<int>();
    model.m_distinct = meta.at("m_distinct").get<int>();
    const auto d = meta.at("d").get<std::uint64_t>();
    model.trace_over_n = meta.at("trace_over_n").get<double>();
    model.scheme = meta.value("scheme", "uniform") == std::string("als")
                       ? SamplingScheme::ALS
                       : SamplingScheme::PlainUniform;
    model.seed = meta.value("seed", std::uint64_t{0});
    const auto m = static_cast<std::uint64_t>(model.m_distinct);
    model.landmarks.resize(model.m_distinct, static_cast<Index>(d));
    read_array(is, model.landmarks.data(), m * d);
    model.all_eigvals_m.resize(model.m_distinct);
    read_array(is, model.all_eigvals_m.data(), m);
    model.betas.resize(model.m_distinct, model.ell);
    read_array(is, model.betas.data(), m * static_cast<std::uint64_t>(model.ell));
    model.eigvals_m = model.all_eigvals_m.head(model.ell);
    return model;
}

}  // namespace nykpca
