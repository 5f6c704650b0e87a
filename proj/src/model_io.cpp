#include "gridmark/model_io.hpp"

#include "gridmark/error.hpp"
#include "gridmark/random.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace gridmark {

namespace {

[[noreturn]] void malformed(const std::string& what)
{
    throw Error(ErrorCode::MalformedFile, what);
}

void check_side(int n)
{
    if (n <= 0 || n % 8 != 0)
        throw Error(ErrorCode::DimensionError,
                    "grid side " + std::to_string(n) + " is not a positive multiple of 8");
}

// Line-oriented cursor over a text buffer.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& line)
    {
        if (pos_ >= text_.size())
            return false;
        std::size_t end = text_.find('\n', pos_);
        if (end == std::string_view::npos)
            end = text_.size();
        line = text_.substr(pos_, end - pos_);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        pos_ = end + 1;
        ++lineno_;
        return true;
    }

    int lineno() const { return lineno_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int lineno_ = 0;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i]))
            ++i;
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j]))
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_real(std::string_view tok, int lineno)
{
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        malformed("line " + std::to_string(lineno) + ": bad number '" + std::string(tok) + "'");
    if (!std::isfinite(v))
        throw Error(ErrorCode::NonFiniteValue,
                    "line " + std::to_string(lineno) + ": non-finite value '" + std::string(tok) + "'");
    return v;
}

int parse_int(std::string_view tok, const std::string& what)
{
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        malformed("bad integer for " + what + ": '" + std::string(tok) + "'");
    return v;
}

// Whitespace/comment tokenizer for the netpbm headers.
class PnmTokens {
public:
    explicit PnmTokens(std::string_view text) : text_(text) {}

    void skip()
    {
        while (pos_ < text_.size()) {
            if (is_space(text_[pos_])) {
                ++pos_;
            } else if (text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view token()
    {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '#')
            ++pos_;
        if (start == pos_)
            malformed("unexpected end of watermark file");
        return text_.substr(start, pos_ - start);
    }

    // P1 pixels may be packed without separators.
    char bit_char()
    {
        skip();
        if (pos_ >= text_.size())
            malformed("unexpected end of watermark file");
        return text_[pos_++];
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

std::string_view direction_name(Direction d) noexcept
{
    switch (d) {
    case Direction::X1: return "x1";
    case Direction::X2: return "x2";
    case Direction::X3: return "x3";
    }
    return "?";
}

Direction parse_direction(std::string_view name)
{
    if (name == "x1") return Direction::X1;
    if (name == "x2") return Direction::X2;
    if (name == "x3") return Direction::X3;
    throw Error(ErrorCode::BadParameter, "unknown direction '" + std::string(name) + "'");
}

GridModel::GridModel(int side) : n(side)
{
    for (auto& c : coords)
        c = Matrix::Zero(side, side);
}

GridModel::GridModel(Matrix x1, Matrix x2, Matrix x3)
    : n(static_cast<int>(x1.rows())), coords{std::move(x1), std::move(x2), std::move(x3)}
{
}

void GridModel::validate() const
{
    check_side(n);
    for (const auto& c : coords) {
        if (c.rows() != n || c.cols() != n)
            throw Error(ErrorCode::DimensionError, "coordinate matrix is not " + std::to_string(n) + "x" +
                                                       std::to_string(n));
        if (!c.allFinite())
            throw Error(ErrorCode::NonFiniteValue, "coordinate matrix contains NaN or Inf");
    }
}

std::size_t WatermarkBitmap::popcount() const
{
    std::size_t k = 0;
    for (auto b : bits)
        k += b;
    return k;
}

std::string_view model_kind_name(ModelKind k) noexcept
{
    switch (k) {
    case ModelKind::Plane: return "plane";
    case ModelKind::Harmonic: return "harmonic";
    case ModelKind::Meshgrid: return "meshgrid";
    case ModelKind::Bumps: return "bumps";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view name)
{
    if (name == "plane") return ModelKind::Plane;
    if (name == "harmonic") return ModelKind::Harmonic;
    if (name == "meshgrid") return ModelKind::Meshgrid;
    if (name == "bumps") return ModelKind::Bumps;
    throw Error(ErrorCode::BadParameter, "unknown model kind '" + std::string(name) + "'");
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_shortest(double v)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

std::string format_model(const GridModel& m)
{
    m.validate();
    std::string out;
    out.reserve(static_cast<std::size_t>(m.n) * m.n * 3 * 24 + 64);
    out += "GRID3 " + std::to_string(m.n) + "\n";
    for (int d = 0; d < 3; ++d) {
        out += "MATRIX ";
        out += direction_name(static_cast<Direction>(d));
        out += '\n';
        const Matrix& c = m.coords[d];
        for (int i = 0; i < m.n; ++i) {
            for (int j = 0; j < m.n; ++j) {
                if (j)
                    out += ' ';
                out += format_double(c(i, j));
            }
            out += '\n';
        }
    }
    return out;
}

GridModel parse_model(std::string_view text)
{
    LineReader lines(text);
    std::string_view line;
    if (!lines.next(line))
        malformed("empty model file");
    auto header = split_ws(line);
    if (header.size() != 2 || header[0] != "GRID3")
        malformed("line 1: expected 'GRID3 <N>'");
    const int n = parse_int(header[1], "grid side");
    check_side(n);

    GridModel m(n);
    for (int d = 0; d < 3; ++d) {
        const auto expected = direction_name(static_cast<Direction>(d));
        if (!lines.next(line))
            malformed("missing 'MATRIX " + std::string(expected) + "' block");
        auto tag = split_ws(line);
        if (tag.size() != 2 || tag[0] != "MATRIX" || tag[1] != expected)
            malformed("line " + std::to_string(lines.lineno()) + ": expected 'MATRIX " + std::string(expected) + "'");
        for (int i = 0; i < n; ++i) {
            if (!lines.next(line))
                malformed("matrix " + std::string(expected) + " has fewer than " + std::to_string(n) + " rows");
            auto toks = split_ws(line);
            if (static_cast<int>(toks.size()) != n)
                malformed("line " + std::to_string(lines.lineno()) + ": expected " + std::to_string(n) +
                          " values, found " + std::to_string(toks.size()));
            for (int j = 0; j < n; ++j)
                m.coords[d](i, j) = parse_real(toks[j], lines.lineno());
        }
    }
    while (lines.next(line)) {
        if (!split_ws(line).empty())
            malformed("line " + std::to_string(lines.lineno()) + ": trailing content after x3 block");
    }
    return m;
}

GridModel load_model(const std::filesystem::path& path)
{
    return parse_model(read_text_file(path));
}

void save_model(const GridModel& m, const std::filesystem::path& path)
{
    write_text_file(path, format_model(m));
}

WatermarkBitmap parse_watermark(std::string_view text)
{
    PnmTokens toks(text);
    const std::string_view magic = toks.token();
    if (magic != "P1" && magic != "P2")
        malformed("watermark must be PBM (P1) or PGM (P2), got '" + std::string(magic) + "'");
    const int width = parse_int(toks.token(), "width");
    const int height = parse_int(toks.token(), "height");
    if (width <= 0 || height <= 0)
        malformed("watermark dimensions must be positive");
    if (width != height)
        throw Error(ErrorCode::NotSquare,
                    "watermark is " + std::to_string(width) + "x" + std::to_string(height) + ", must be square");

    WatermarkBitmap wm(width);
    if (magic == "P1") {
        for (auto& b : wm.bits) {
            const char c = toks.bit_char();
            if (c != '0' && c != '1')
                malformed(std::string("bad PBM pixel '") + c + "'");
            b = static_cast<std::uint8_t>(c - '0');
        }
    } else {
        const int maxval = parse_int(toks.token(), "maxval");
        if (maxval <= 0 || maxval > 65535)
            malformed("bad PGM maxval");
        for (auto& b : wm.bits) {
            const int g = parse_int(toks.token(), "gray value");
            if (g < 0 || g > maxval)
                malformed("PGM gray value out of range");
            b = g >= 128 ? 1 : 0;
        }
    }
    return wm;
}

WatermarkBitmap load_watermark(const std::filesystem::path& path)
{
    return parse_watermark(read_text_file(path));
}

std::string format_watermark(const WatermarkBitmap& wm)
{
    std::string out = "P1\n" + std::to_string(wm.w) + " " + std::to_string(wm.w) + "\n";
    for (int r = 0; r < wm.w; ++r) {
        for (int c = 0; c < wm.w; ++c) {
            if (c)
                out += ' ';
            out += wm.at(r, c) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

void save_watermark(const WatermarkBitmap& wm, const std::filesystem::path& path)
{
    write_text_file(path, format_watermark(wm));
}

GridModel generate_model(ModelKind kind, int n, std::uint64_t seed)
{
    check_side(n);
    GridModel m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m[Direction::X1](i, j) = i;
            m[Direction::X2](i, j) = j;
        }
    }
    Matrix& z = m[Direction::X3];
    const double nd = n;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Rng rng(seed);

    switch (kind) {
    case ModelKind::Plane:
        break;
    case ModelKind::Harmonic: {
        const double pu = rng.uniform(0.0, two_pi);
        const double pv = rng.uniform(0.0, two_pi);
        const double amp = nd / 16.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                z(i, j) = amp * std::sin(3.0 * two_pi * i / nd + pu) * std::sin(2.0 * two_pi * j / nd + pv) +
                          0.25 * amp * std::sin(7.0 * two_pi * (i + j) / nd);
        break;
    }
    case ModelKind::Meshgrid: {
        // Seed shifts the saddle centre.
        const double ci = nd * rng.uniform(0.4, 0.6);
        const double cj = nd * rng.uniform(0.4, 0.6);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double u = (i - ci) / nd;
                const double v = (j - cj) / nd;
                z(i, j) = nd / 4.0 * (u * u - v * v) + nd / 2.0 * u * u * u * (1.0 + v);
            }
        }
        break;
    }
    case ModelKind::Bumps: {
        const int count = 320 + static_cast<int>(rng.below(65));
        for (int k = 0; k < count; ++k) {
            const double ci = rng.uniform(0.0, nd);
            const double cj = rng.uniform(0.0, nd);
            const double sigma = nd * rng.uniform(1.0 / 48.0, 1.0 / 32.0);
            const double height = nd * rng.uniform(1.0 / 48.0, 1.0 / 16.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
            const double inv = 1.0 / (2.0 * sigma * sigma);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double di = i - ci;
                    const double dj = j - cj;
                    z(i, j) += height * std::exp(-(di * di + dj * dj) * inv);
                }
        }
        break;
    }
    }
    return m;
}

WatermarkBitmap generate_watermark(int w, std::uint64_t seed)
{
    if (w <= 0)
        throw Error(ErrorCode::BadParameter, "watermark side must be positive");
    WatermarkBitmap wm(w);
    if (seed != 0) {
        Rng rng(seed);
        for (auto& b : wm.bits)
            b = static_cast<std::uint8_t>(rng.next() >> 63);
        return wm;
    }
    const double c = (w - 1) / 2.0;
    const double radius = w / 4.0;
    for (int r = 0; r < w; ++r) {
        for (int col = 0; col < w; ++col) {
            const bool frame = r == 0 || col == 0 || r == w - 1 || col == w - 1;
            const bool diag = r == col;
            const bool disc = (r - c) * (r - c) + (col - c) * (col - c) <= radius * radius;
            const bool bar = r == w / 4 && col > w / 2;
            wm.at(r, col) = (frame || diag || disc || bar) ? 1 : 0;
        }
    }
    return wm;
}

std::string format_obj(const GridModel& m)
{
    std::string out;
    const int n = m.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out += "v " + format_double(m[Direction::X1](i, j)) + " " + format_double(m[Direction::X2](i, j)) + " " +
                   format_double(m[Direction::X3](i, j)) + "\n";
    auto idx = [n](int i, int j) { return std::to_string(i * n + j + 1); };
    for (int i = 0; i + 1 < n; ++i) {
        for (int j = 0; j + 1 < n; ++j) {
            out += "f " + idx(i, j) + " " + idx(i + 1, j) + " " + idx(i + 1, j + 1) + "\n";
            out += "f " + idx(i, j) + " " + idx(i + 1, j + 1) + " " + idx(i, j + 1) + "\n";
        }
    }
    return out;
}

void export_obj(const GridModel& m, const std::filesystem::path& path)
{
    write_text_file(path, format_obj(m));
}

} // namespace gridmark
