#ifndef SIMORTH_BILINEAR_HPP
#define SIMORTH_BILINEAR_HPP

#include <utility>

#include "simorth/linalg.hpp"

namespace simorth {

/**
 * Symmetric bilinear form on a fixed coordinate space, held by its Gram
 * matrix. Symmetry is checked eagerly at construction; everything
 * downstream may rely on it. Immutable.
 */
template <typename Scalar>
class BilinearForm {
  public:
    BilinearForm() : gram_(0, 0) {}

    explicit BilinearForm(Matrix<Scalar> gram) : gram_(std::move(gram))
    {
        if (gram_.rows() != gram_.cols())
            throw Error(ErrorCode::InvalidArgument, "Gram matrix is not square");
        for (Eigen::Index i = 0; i < gram_.rows(); ++i)
            for (Eigen::Index j = i + 1; j < gram_.cols(); ++j)
                if (!(gram_(i, j) == gram_(j, i)))
                    throw Error(ErrorCode::NotSymmetric, "Gram matrix is not symmetric");
    }

    Eigen::Index dimension() const { return gram_.rows(); }
    const Matrix<Scalar>& gram() const { return gram_; }

    Scalar evaluate(const Vector<Scalar>& v, const Vector<Scalar>& w) const
    {
        if (v.size() != dimension() || w.size() != dimension())
            throw Error(ErrorCode::InvalidArgument, "vector size does not match the form");
        Scalar acc = Scalar(0);
        for (Eigen::Index i = 0; i < v.size(); ++i)
            for (Eigen::Index j = 0; j < w.size(); ++j) acc += v(i) * gram_(i, j) * w(j);
        return acc;
    }

    bool is_zero() const { return is_zero_matrix(gram_); }

    friend bool operator==(const BilinearForm& a, const BilinearForm& b)
    {
        return matrices_equal(a.gram_, b.gram_);
    }
    friend bool operator!=(const BilinearForm& a, const BilinearForm& b) { return !(a == b); }

  private:
    Matrix<Scalar> gram_;
};

/** P^T G P; the Gram matrix of the form pulled back along P. */
template <typename Scalar>
Matrix<Scalar> congruent_gram(const Matrix<Scalar>& gram, const Matrix<Scalar>& p)
{
    return p.transpose() * gram * p;
}

/** Radical {v : <v, w> = 0 for all w}, the kernel of the Gram matrix. */
template <typename Scalar>
Subspace<Scalar> radical(const BilinearForm<Scalar>& f)
{
    return Subspace<Scalar>::from_columns(kernel(f.gram()));
}

/** Restriction of f to the subspace, in the subspace basis coordinates. */
template <typename Scalar>
BilinearForm<Scalar> restrict_form(const BilinearForm<Scalar>& f, const Subspace<Scalar>& s)
{
    if (s.ambient_dimension() != f.dimension())
        throw Error(ErrorCode::InvalidArgument, "subspace ambient does not match the form");
    return BilinearForm<Scalar>(congruent_gram(f.gram(), s.basis()));
}

/**
 * Deterministic coordinate complement of a subspace: the span of the
 * standard basis vectors at the non-pivot coordinates of the canonical
 * basis. Returned as the n x (n-k) matrix of those standard vectors.
 */
template <typename Scalar>
Matrix<Scalar> coordinate_section(const Subspace<Scalar>& s)
{
    const Eigen::Index n = s.ambient_dimension();
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (Eigen::Index p : s.pivot_coordinates()) is_pivot[static_cast<std::size_t>(p)] = true;
    Matrix<Scalar> sec = Matrix<Scalar>::Constant(n, n - s.dimension(), Scalar(0));
    Eigen::Index out = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (is_pivot[static_cast<std::size_t>(j)]) continue;
        sec(j, out) = Scalar(1);
        ++out;
    }
    return sec;
}

/**
 * The form induced on V/s, realized on the coordinate complement of s:
 * `form` is the induced form in section coordinates, `section` embeds
 * those coordinates back into V.
 */
template <typename Scalar>
struct QuotientForm {
    BilinearForm<Scalar> form;
    Matrix<Scalar> section;
    Subspace<Scalar> modded_out;
};

/**
 * Quotient of f by a subspace of its radical. The induced pairing
 * <v+s, w+s> is well defined exactly when s is inside rad(f); anything
 * else is refused.
 */
template <typename Scalar>
QuotientForm<Scalar> quotient_by(const BilinearForm<Scalar>& f, const Subspace<Scalar>& s)
{
    if (s.ambient_dimension() != f.dimension())
        throw Error(ErrorCode::InvalidArgument, "subspace ambient does not match the form");
    if (!radical(f).contains(s))
        throw Error(ErrorCode::NotInRadical, "quotient subspace is not inside the radical");
    Matrix<Scalar> sec = coordinate_section(s);
    return QuotientForm<Scalar>{BilinearForm<Scalar>(congruent_gram(f.gram(), sec)), sec, s};
}

/**
 * True when <v, v> = 0 for every v: in characteristic 2 that is "zero
 * diagonal", elsewhere polarization forces the whole form to vanish.
 */
template <typename Scalar>
bool is_alternating(const BilinearForm<Scalar>& f, const FieldDescriptor& d)
{
    ScalarTraits<Scalar>::check(d);
    for (Eigen::Index i = 0; i < f.dimension(); ++i)
        if (!f.gram()(i, i).is_zero()) return false;
    if (d.characteristic() == 2) return true;
    return f.is_zero();
}

}  // namespace simorth

#endif
