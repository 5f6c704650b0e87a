#include "gridmark/attacks.hpp"

#include "gridmark/error.hpp"
#include "gridmark/random.hpp"

#include <Eigen/Geometry>

#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

namespace gridmark {

namespace {

[[noreturn]] void bad(const std::string& what)
{
    throw Error(ErrorCode::BadParameter, what);
}

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

using Params = std::map<std::string, std::string, std::less<>>;

Params split_params(std::string_view text)
{
    Params out;
    while (!text.empty()) {
        const std::size_t comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0)
            bad("attack parameter '" + std::string(item) + "' is not key=value");
        if (!out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1))).second)
            bad("attack parameter '" + std::string(item.substr(0, eq)) + "' given twice");
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

class ParamReader {
public:
    ParamReader(std::string name, Params p) : name_(std::move(name)), p_(std::move(p)) {}

    double real(const std::string& key, std::optional<double> fallback = std::nullopt)
    {
        auto it = p_.find(key);
        if (it == p_.end()) {
            if (!fallback)
                bad(name_ + ": missing parameter '" + key + "'");
            return *fallback;
        }
        double v = 0.0;
        const std::string& s = it->second;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
            bad(name_ + ": bad value for '" + key + "': '" + s + "'");
        p_.erase(it);
        return v;
    }

    int integer(const std::string& key, std::optional<int> fallback = std::nullopt)
    {
        const double v = real(key, fallback ? std::optional<double>(*fallback) : std::nullopt);
        if (v != std::floor(v) || std::abs(v) > 1e9)
            bad(name_ + ": '" + key + "' must be an integer");
        return static_cast<int>(v);
    }

    std::uint64_t seed()
    {
        auto it = p_.find("seed");
        if (it == p_.end())
            return 1;
        std::uint64_t v = 0;
        const std::string& s = it->second;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            bad(name_ + ": bad seed '" + s + "'");
        p_.erase(it);
        return v;
    }

    std::optional<std::string> text(const std::string& key)
    {
        auto it = p_.find(key);
        if (it == p_.end())
            return std::nullopt;
        std::string v = it->second;
        p_.erase(it);
        return v;
    }

    void finish() const
    {
        if (!p_.empty())
            bad(name_ + ": unknown parameter '" + p_.begin()->first + "'");
    }

private:
    std::string name_;
    Params p_;
};

std::string num(double v) { return format_shortest(v + 0.0); } // folds -0 to 0

std::pair<double, double> value_range(const Matrix& m) { return {m.minCoeff(), m.maxCoeff()}; }

} // namespace

void validate_attack(const AttackSpec& a)
{
    std::visit(overloaded{
                   [](const attack::Rotate& r) {
                       if (!r.axis.allFinite() || r.axis.norm() == 0.0 || !std::isfinite(r.angle))
                           bad("rotate: axis must be a finite non-zero vector and angle finite");
                   },
                   [](const attack::Translate& t) {
                       if (!std::isfinite(t.dx) || !std::isfinite(t.dy) || !std::isfinite(t.dz))
                           bad("translate: offsets must be finite");
                   },
                   [](const attack::Scale& s) {
                       if (!(s.k > 0.0) || !std::isfinite(s.k))
                           bad("scale: k must be positive");
                   },
                   [](const attack::RandomNoise& r) {
                       if (!(r.amplitude >= 0.0) || !std::isfinite(r.amplitude))
                           bad("randomnoise: amplitude must be non-negative");
                   },
                   [](const attack::SaltPepper& s) {
                       if (!(s.density >= 0.0 && s.density <= 1.0))
                           bad("saltpepper: density must lie in [0, 1]");
                   },
                   [](const attack::Gaussian& g) {
                       if (g.hsize < 3 || g.hsize % 2 == 0 || !(g.sigma > 0.0))
                           bad("gaussian: hsize must be odd and >= 3, sigma positive");
                   },
                   [](const attack::Laplacian& l) {
                       if (!(l.alpha >= 0.0 && l.alpha <= 1.0))
                           bad("laplacian: alpha must lie in [0, 1]");
                   },
                   [](const attack::LoG& g) {
                       if (g.hsize < 3 || g.hsize % 2 == 0 || !(g.sigma > 0.0))
                           bad("log: hsize must be odd and >= 3, sigma positive");
                   },
                   [](const attack::Crop& c) {
                       if (!(c.p > 0.0 && c.p < 1.0))
                           bad("crop: p must lie in (0, 1)");
                   },
               },
               a);
}

AttackSpec parse_attack(std::string_view text)
{
    const std::size_t colon = text.find(':');
    const std::string name(text.substr(0, colon));
    ParamReader r(name, colon == std::string_view::npos ? Params{} : split_params(text.substr(colon + 1)));
    AttackSpec out;
    if (name == "rotate") {
        attack::Rotate a;
        if (auto axis = r.text("axis")) {
            if (*axis == "x")
                a.axis = Eigen::Vector3d::UnitX();
            else if (*axis == "y")
                a.axis = Eigen::Vector3d::UnitY();
            else if (*axis == "z")
                a.axis = Eigen::Vector3d::UnitZ();
            else
                bad("rotate: axis must be x, y or z (or give ax, ay, az)");
        } else {
            a.axis = {r.real("ax"), r.real("ay"), r.real("az")};
        }
        a.angle = r.real("angle");
        out = a;
    } else if (name == "translate") {
        out = attack::Translate{r.real("dx", 0.0), r.real("dy", 0.0), r.real("dz", 0.0)};
    } else if (name == "scale") {
        out = attack::Scale{r.real("k")};
    } else if (name == "randomnoise") {
        const double a = r.real("a");
        out = attack::RandomNoise{a, r.seed()};
    } else if (name == "saltpepper") {
        const double d = r.real("d");
        out = attack::SaltPepper{d, r.seed()};
    } else if (name == "gaussian") {
        const int h = r.integer("hsize", 3);
        out = attack::Gaussian{h, r.real("sigma", 0.5)};
    } else if (name == "laplacian") {
        out = attack::Laplacian{r.real("alpha", 0.2)};
    } else if (name == "log") {
        const int h = r.integer("hsize", 5);
        out = attack::LoG{h, r.real("sigma", 0.5)};
    } else if (name == "crop") {
        out = attack::Crop{r.real("p")};
    } else {
        bad("unknown attack '" + name + "'");
    }
    r.finish();
    validate_attack(out);
    return out;
}

std::string attack_name(const AttackSpec& a)
{
    return std::visit(overloaded{
                          [](const attack::Rotate&) { return std::string("rotate"); },
                          [](const attack::Translate&) { return std::string("translate"); },
                          [](const attack::Scale&) { return std::string("scale"); },
                          [](const attack::RandomNoise&) { return std::string("randomnoise"); },
                          [](const attack::SaltPepper&) { return std::string("saltpepper"); },
                          [](const attack::Gaussian&) { return std::string("gaussian"); },
                          [](const attack::Laplacian&) { return std::string("laplacian"); },
                          [](const attack::LoG&) { return std::string("log"); },
                          [](const attack::Crop&) { return std::string("crop"); },
                      },
                      a);
}

std::string attack_params(const AttackSpec& a)
{
    return std::visit(
        overloaded{
            [](const attack::Rotate& r) {
                if (r.axis == Eigen::Vector3d::UnitX())
                    return "axis=x,angle=" + num(r.angle);
                if (r.axis == Eigen::Vector3d::UnitY())
                    return "axis=y,angle=" + num(r.angle);
                if (r.axis == Eigen::Vector3d::UnitZ())
                    return "axis=z,angle=" + num(r.angle);
                return "ax=" + num(r.axis.x()) + ",ay=" + num(r.axis.y()) + ",az=" + num(r.axis.z()) +
                       ",angle=" + num(r.angle);
            },
            [](const attack::Translate& t) { return "dx=" + num(t.dx) + ",dy=" + num(t.dy) + ",dz=" + num(t.dz); },
            [](const attack::Scale& s) { return "k=" + num(s.k); },
            [](const attack::RandomNoise& r) { return "a=" + num(r.amplitude) + ",seed=" + std::to_string(r.seed); },
            [](const attack::SaltPepper& s) { return "d=" + num(s.density) + ",seed=" + std::to_string(s.seed); },
            [](const attack::Gaussian& g) { return "hsize=" + std::to_string(g.hsize) + ",sigma=" + num(g.sigma); },
            [](const attack::Laplacian& l) { return "alpha=" + num(l.alpha); },
            [](const attack::LoG& g) { return "hsize=" + std::to_string(g.hsize) + ",sigma=" + num(g.sigma); },
            [](const attack::Crop& c) { return "p=" + num(c.p); },
        },
        a);
}

std::string format_attack(const AttackSpec& a) { return attack_name(a) + ":" + attack_params(a); }

RigidTransform RigidTransform::inverse() const
{
    RigidTransform inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(inv.rotation * translation);
    return inv;
}

GridModel apply_transform(const GridModel& m, const RigidTransform& t)
{
    GridModel out = m;
    for (int i = 0; i < m.n; ++i) {
        for (int j = 0; j < m.n; ++j) {
            const Eigen::Vector3d p(m[Direction::X1](i, j), m[Direction::X2](i, j), m[Direction::X3](i, j));
            const Eigen::Vector3d q = t.rotation * p + t.translation;
            out[Direction::X1](i, j) = q.x();
            out[Direction::X2](i, j) = q.y();
            out[Direction::X3](i, j) = q.z();
        }
    }
    return out;
}

std::string format_registration(const RigidTransform& t)
{
    std::string out = "REGISTRATION\nrotation";
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out += " " + num(t.rotation(r, c));
    out += "\ntranslation";
    for (int k = 0; k < 3; ++k)
        out += " " + num(t.translation(k));
    out += "\n";
    return out;
}

RigidTransform parse_registration(std::string_view text)
{
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])))
            ++j;
        if (j > i)
            toks.emplace_back(text.substr(i, j - i));
        i = j;
    }
    if (toks.size() != 15 || toks[0] != "REGISTRATION" || toks[1] != "rotation" || toks[11] != "translation")
        throw Error(ErrorCode::MalformedFile, "registration file is malformed");
    auto value = [&](std::size_t k) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(toks[k].data(), toks[k].data() + toks[k].size(), v);
        if (ec != std::errc() || ptr != toks[k].data() + toks[k].size())
            throw Error(ErrorCode::MalformedFile, "registration file has a bad number");
        return v;
    };
    RigidTransform t;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            t.rotation(r, c) = value(2 + static_cast<std::size_t>(r * 3 + c));
    for (int k = 0; k < 3; ++k)
        t.translation(k) = value(12 + static_cast<std::size_t>(k));
    return t;
}

GridModel random_noise(const GridModel& m, double amplitude, std::uint64_t seed)
{
    if (!(amplitude >= 0.0))
        bad("randomnoise: amplitude must be non-negative");
    GridModel out = m;
    if (amplitude == 0.0)
        return out;
    Rng rng(seed);
    for (Matrix& c : out.coords) {
        const auto [lo, hi] = value_range(c);
        const double half = amplitude * (hi - lo);
        for (Eigen::Index k = 0; k < c.size(); ++k)
            c.data()[k] += rng.uniform(-half, half);
    }
    return out;
}

GridModel salt_pepper(const GridModel& m, double density, std::uint64_t seed)
{
    if (!(density >= 0.0 && density <= 1.0))
        bad("saltpepper: density must lie in [0, 1]");
    GridModel out = m;
    Rng rng(seed);
    const std::size_t total = static_cast<std::size_t>(m.n) * m.n;
    const auto count = static_cast<std::size_t>(std::llround(density * static_cast<double>(total)));
    std::vector<std::uint32_t> idx(total);
    for (Matrix& c : out.coords) {
        const auto [lo, hi] = value_range(c);
        std::iota(idx.begin(), idx.end(), 0u);
        // Partial Fisher-Yates: the first `count` entries are a uniform sample.
        for (std::size_t k = 0; k < count; ++k)
            std::swap(idx[k], idx[k + rng.below(total - k)]);
        for (std::size_t k = 0; k < count; ++k)
            c.data()[idx[k]] = k < count / 2 ? lo : hi;
    }
    return out;
}

int crop_side(int n, double p) { return static_cast<int>(std::lround(std::sqrt(p) * n)); }

GridModel crop(const GridModel& m, double p)
{
    if (!(p > 0.0 && p < 1.0))
        bad("crop: p must lie in (0, 1)");
    GridModel out = m;
    const int side = std::min(crop_side(m.n, p), m.n);
    for (Matrix& c : out.coords) {
        const double mean = c.mean();
        c.topLeftCorner(side, side).setConstant(mean);
    }
    return out;
}

Matrix kernel_gaussian(int hsize, double sigma)
{
    if (hsize < 1 || hsize % 2 == 0 || !(sigma > 0.0))
        bad("gaussian kernel: hsize must be odd, sigma positive");
    const int r = hsize / 2;
    Matrix k(hsize, hsize);
    for (int a = -r; a <= r; ++a)
        for (int b = -r; b <= r; ++b)
            k(a + r, b + r) = std::exp(-(a * a + b * b) / (2.0 * sigma * sigma));
    return k / k.sum();
}

Matrix kernel_laplacian(double alpha)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        bad("laplacian kernel: alpha must lie in [0, 1]");
    const double e = alpha / 4.0;
    const double f = (1.0 - alpha) / 4.0;
    Matrix k(3, 3);
    k << e, f, e, f, -1.0, f, e, f, e;
    return k * (4.0 / (alpha + 1.0));
}

Matrix kernel_log(int hsize, double sigma)
{
    const Matrix g = kernel_gaussian(hsize, sigma);
    const int r = hsize / 2;
    const double s2 = sigma * sigma;
    Matrix h(hsize, hsize);
    for (int a = -r; a <= r; ++a)
        for (int b = -r; b <= r; ++b)
            h(a + r, b + r) = (a * a + b * b - 2.0 * s2) / (s2 * s2) * g(a + r, b + r);
    h.array() -= h.mean();
    return h;
}

Matrix convolve_replicate(const Matrix& m, const Matrix& kernel)
{
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();
    const Eigen::Index kr = kernel.rows() / 2;
    const Eigen::Index kc = kernel.cols() / 2;
    Matrix out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (Eigen::Index a = 0; a < kernel.rows(); ++a) {
                // Kernel flipped for true convolution.
                const Eigen::Index si = std::clamp<Eigen::Index>(i + kr - a, 0, rows - 1);
                for (Eigen::Index b = 0; b < kernel.cols(); ++b) {
                    const Eigen::Index sj = std::clamp<Eigen::Index>(j + kc - b, 0, cols - 1);
                    acc += kernel(a, b) * m(si, sj);
                }
            }
            out(i, j) = acc;
        }
    }
    return out;
}

GridModel smooth(const GridModel& m, const attack::Gaussian& a)
{
    validate_attack(a);
    const Matrix k = kernel_gaussian(a.hsize, a.sigma);
    GridModel out = m;
    for (Matrix& c : out.coords)
        c = convolve_replicate(c, k);
    return out;
}

GridModel smooth(const GridModel& m, const attack::Laplacian& a)
{
    validate_attack(a);
    GridModel out = m;
    const int n = m.n;
    for (int d = 0; d < 3; ++d) {
        const Matrix& src = m.coords[d];
        Matrix& dst = out.coords[d];
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double nb = (src(std::max(i - 1, 0), j) + src(std::min(i + 1, n - 1), j) +
                                   src(i, std::max(j - 1, 0)) + src(i, std::min(j + 1, n - 1))) /
                                  4.0;
                dst(i, j) = (1.0 - a.alpha) * src(i, j) + a.alpha * nb;
            }
        }
    }
    return out;
}

GridModel smooth(const GridModel& m, const attack::LoG& a)
{
    validate_attack(a);
    const Matrix k = kernel_log(a.hsize, a.sigma);
    GridModel out = m;
    for (Matrix& c : out.coords)
        c -= convolve_replicate(c, k);
    return out;
}

AttackResult apply_attack(const GridModel& m, const AttackSpec& a)
{
    m.validate();
    validate_attack(a);
    return std::visit(
        overloaded{
            [&](const attack::Rotate& r) {
                RigidTransform t;
                t.rotation = Eigen::AngleAxisd(r.angle, r.axis.normalized()).toRotationMatrix();
                return AttackResult{apply_transform(m, t), t.inverse()};
            },
            [&](const attack::Translate& tr) {
                RigidTransform t;
                t.translation = {tr.dx, tr.dy, tr.dz};
                return AttackResult{apply_transform(m, t), t.inverse()};
            },
            [&](const attack::Scale& s) {
                GridModel out = m;
                for (Matrix& c : out.coords)
                    c *= s.k;
                return AttackResult{std::move(out), std::nullopt};
            },
            [&](const attack::RandomNoise& r) {
                return AttackResult{random_noise(m, r.amplitude, r.seed), std::nullopt};
            },
            [&](const attack::SaltPepper& s) {
                return AttackResult{salt_pepper(m, s.density, s.seed), std::nullopt};
            },
            [&](const attack::Gaussian& g) { return AttackResult{smooth(m, g), std::nullopt}; },
            [&](const attack::Laplacian& l) { return AttackResult{smooth(m, l), std::nullopt}; },
            [&](const attack::LoG& g) { return AttackResult{smooth(m, g), std::nullopt}; },
            [&](const attack::Crop& c) { return AttackResult{crop(m, c.p), std::nullopt}; },
        },
        a);
}

} // namespace gridmark
