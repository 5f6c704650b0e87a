#include "gridmark/wavelet.hpp"

#include "gridmark/error.hpp"
#include "gridmark/model_io.hpp"

namespace gridmark {

QuadBands dwt2(const Matrix& m)
{
    if (m.rows() != m.cols() || m.rows() < 2 || m.rows() % 2 != 0)
        throw Error(ErrorCode::DimensionError, "dwt2 needs an even square matrix, got " + std::to_string(m.rows()) +
                                                   "x" + std::to_string(m.cols()));
    const Eigen::Index h = m.rows() / 2;
    QuadBands out{Matrix(h, h), Matrix(h, h), Matrix(h, h), Matrix(h, h)};
    for (Eigen::Index i = 0; i < h; ++i) {
        for (Eigen::Index j = 0; j < h; ++j) {
            const double a = m(2 * i, 2 * j);
            const double b = m(2 * i, 2 * j + 1);
            const double c = m(2 * i + 1, 2 * j);
            const double d = m(2 * i + 1, 2 * j + 1);
            out.ca(i, j) = (a + b + c + d) / 2.0;
            out.ch(i, j) = (a + b - c - d) / 2.0;
            out.cv(i, j) = (a - b + c - d) / 2.0;
            out.cd(i, j) = (a - b - c + d) / 2.0;
        }
    }
    return out;
}

Matrix idwt2(const QuadBands& b)
{
    const Eigen::Index h = b.ca.rows();
    for (const Matrix* x : {&b.ca, &b.ch, &b.cv, &b.cd}) {
        if (x->rows() != h || x->cols() != h || h == 0)
            throw Error(ErrorCode::DimensionError, "idwt2 bands must be equal non-empty squares");
    }
    Matrix m(2 * h, 2 * h);
    for (Eigen::Index i = 0; i < h; ++i) {
        for (Eigen::Index j = 0; j < h; ++j) {
            const double ca = b.ca(i, j);
            const double ch = b.ch(i, j);
            const double cv = b.cv(i, j);
            const double cd = b.cd(i, j);
            m(2 * i, 2 * j) = (ca + ch + cv + cd) / 2.0;
            m(2 * i, 2 * j + 1) = (ca + ch - cv - cd) / 2.0;
            m(2 * i + 1, 2 * j) = (ca - ch + cv - cd) / 2.0;
            m(2 * i + 1, 2 * j + 1) = (ca - ch - cv + cd) / 2.0;
        }
    }
    return m;
}

Matrix& DetailTree::embed_band(int b)
{
    QuadBands& q = level3.at(static_cast<std::size_t>(b / 2));
    return b % 2 == 0 ? q.ch : q.cv;
}

const Matrix& DetailTree::embed_band(int b) const
{
    const QuadBands& q = level3.at(static_cast<std::size_t>(b / 2));
    return b % 2 == 0 ? q.ch : q.cv;
}

std::string embed_band_path(int b)
{
    if (b < 0 || b >= DetailTree::kEmbedBands)
        throw Error(ErrorCode::BadParameter, "embedding band index out of range");
    const char l1 = (b / 4) == 0 ? 'H' : 'V';
    const char l2 = ((b / 2) % 2) == 0 ? 'H' : 'V';
    const char l3 = (b % 2) == 0 ? 'H' : 'V';
    return {l1, '.', l2, '.', l3};
}

DetailTree decompose3(const Matrix& m)
{
    if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 8 != 0)
        throw Error(ErrorCode::DimensionError, "decompose3 needs a square matrix with side divisible by 8");
    DetailTree t;
    t.level1 = dwt2(m);
    t.level2[0] = dwt2(t.level1.ch);
    t.level2[1] = dwt2(t.level1.cv);
    for (int k = 0; k < 2; ++k) {
        t.level3[2 * k] = dwt2(t.level2[k].ch);
        t.level3[2 * k + 1] = dwt2(t.level2[k].cv);
    }
    return t;
}

Matrix reconstruct3(const DetailTree& t)
{
    std::array<QuadBands, 2> l2 = t.level2;
    for (int k = 0; k < 2; ++k) {
        l2[k].ch = idwt2(t.level3[2 * k]);
        l2[k].cv = idwt2(t.level3[2 * k + 1]);
    }
    QuadBands l1 = t.level1;
    l1.ch = idwt2(l2[0]);
    l1.cv = idwt2(l2[1]);
    if (l1.ch.rows() != l1.ca.rows() || l1.cv.rows() != l1.ca.rows())
        throw Error(ErrorCode::DimensionError, "detail tree levels have inconsistent sizes");
    return idwt2(l1);
}

std::vector<std::pair<std::string, const Matrix*>> tree_bands(const DetailTree& t)
{
    std::vector<std::pair<std::string, const Matrix*>> out;
    auto add = [&out](const std::string& prefix, const QuadBands& q) {
        out.emplace_back(prefix + "A", &q.ca);
        out.emplace_back(prefix + "H", &q.ch);
        out.emplace_back(prefix + "V", &q.cv);
        out.emplace_back(prefix + "D", &q.cd);
    };
    add("", t.level1);
    add("H.", t.level2[0]);
    add("V.", t.level2[1]);
    add("H.H.", t.level3[0]);
    add("H.V.", t.level3[1]);
    add("V.H.", t.level3[2]);
    add("V.V.", t.level3[3]);
    return out;
}

void dump_tree(const DetailTree& t, std::ostream& out)
{
    out << "TREE " << t.level1.ca.rows() * 2 << '\n';
    for (const auto& [path, m] : tree_bands(t)) {
        out << "BAND " << path << ' ' << m->rows() << '\n';
        for (Eigen::Index i = 0; i < m->rows(); ++i) {
            for (Eigen::Index j = 0; j < m->cols(); ++j)
                out << (j ? " " : "") << format_double((*m)(i, j));
            out << '\n';
        }
    }
}

} // namespace gridmark
