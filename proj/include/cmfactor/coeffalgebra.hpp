#pragma once

// Finite-dimensional associative algebras given by structure constants, with a
// group homomorphism H -> A^x.

#include "cmfactor/linalg.hpp"
#include "cmfactor/reflgroup.hpp"

#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cmfactor {

class CoeffAlgebra {
public:
    using SparseVec = std::vector<std::pair<std::size_t, CycScalar>>;

    /// `products[i * dim + j]` is e_i e_j; `images[h]` is the image of element h of `group`.
    CoeffAlgebra(std::size_t dim, const std::vector<Vec>& products, Vec unit, std::shared_ptr<const ReflectionGroup> group,
                 std::vector<Vec> images, std::string name = "A")
        : dim_(dim), unit_(std::move(unit)), group_(std::move(group)), images_(std::move(images)), name_(std::move(name)) {
        if (products.size() != dim * dim) throw std::invalid_argument("CoeffAlgebra: wrong number of structure constants");
        if (images_.size() != group_->order()) throw std::invalid_argument("CoeffAlgebra: need one image per group element");
        table_.reserve(products.size());
        for (const auto& p : products) {
            SparseVec s;
            for (std::size_t k = 0; k < p.size(); ++k)
                if (!p[k].is_zero()) s.emplace_back(k, p[k]);
            table_.push_back(std::move(s));
        }
    }

    /// C with the trivial homomorphism from `group` (every element maps to 1).
    static CoeffAlgebra scalars(std::shared_ptr<const ReflectionGroup> group) {
        std::vector<Vec> images(group->order(), Vec{CycScalar(1)});
        return CoeffAlgebra(1, {Vec{CycScalar(1)}}, Vec{CycScalar(1)}, std::move(group), std::move(images), "C");
    }

    /// The group algebra C[H] with H -> C[H] the tautological map.
    static CoeffAlgebra group_algebra(std::shared_ptr<const ReflectionGroup> group) {
        std::size_t n = group->order();
        std::vector<Vec> products;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                products.push_back(unit_vec(n, group->mul(static_cast<int>(i), static_cast<int>(j))));
        std::vector<Vec> images;
        for (std::size_t i = 0; i < n; ++i) images.push_back(unit_vec(n, i));
        return CoeffAlgebra(n, products, unit_vec(n, group->identity()), group, std::move(images), "C[" + group->label() + "]");
    }

    std::size_t dim() const { return dim_; }
    const std::string& name() const { return name_; }
    const ReflectionGroup& group() const { return *group_; }
    const std::shared_ptr<const ReflectionGroup>& group_ptr() const { return group_; }
    const Vec& unit() const { return unit_; }
    Vec zero() const { return zero_vec(dim_); }
    const Vec& image(int h) const { return images_[h]; }

    /// e_H = (1/|H|) sum of the images of H.
    Vec symmetrizer() const {
        Vec e = zero();
        CycScalar w = CycScalar(1) / CycScalar(static_cast<long>(group_->order()));
        for (const auto& im : images_) axpy(e, w, im);
        return e;
    }

    Vec mul(const Vec& a, const Vec& b) const {
        Vec r = zero();
        for (std::size_t i = 0; i < dim_; ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; j < dim_; ++j) {
                if (b[j].is_zero()) continue;
                CycScalar ab = a[i] * b[j];
                for (const auto& [k, s] : table_[i * dim_ + j]) r[k] += ab * s;
            }
        }
        return r;
    }

    /// Matrix of v -> a v.
    Matrix left_matrix(const Vec& a) const {
        Matrix m(dim_, dim_);
        for (std::size_t j = 0; j < dim_; ++j) {
            Vec c = mul(a, unit_vec(dim_, j));
            for (std::size_t i = 0; i < dim_; ++i) m(i, j) = c[i];
        }
        return m;
    }
    /// Matrix of v -> v a.
    Matrix right_matrix(const Vec& a) const {
        Matrix m(dim_, dim_);
        for (std::size_t j = 0; j < dim_; ++j) {
            Vec c = mul(unit_vec(dim_, j), a);
            for (std::size_t i = 0; i < dim_; ++i) m(i, j) = c[i];
        }
        return m;
    }

    bool is_central(const Vec& z) const {
        for (std::size_t j = 0; j < dim_; ++j) {
            Vec e = unit_vec(dim_, j);
            if (mul(z, e) != mul(e, z)) return false;
        }
        return true;
    }

    /// Basis of the centre, as the common kernel of v -> e_i v - v e_i.
    std::vector<Vec> center_basis() const {
        Matrix eq(dim_ * dim_, dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            Vec e = unit_vec(dim_, i);
            for (std::size_t j = 0; j < dim_; ++j) {
                Vec f = unit_vec(dim_, j);
                Vec c = mul(e, f) - mul(f, e);
                for (std::size_t k = 0; k < dim_; ++k) eq(i * dim_ + k, j) = c[k];
            }
        }
        return nullspace(eq);
    }

    bool check_unit() const {
        for (std::size_t j = 0; j < dim_; ++j) {
            Vec e = unit_vec(dim_, j);
            if (mul(unit_, e) != e || mul(e, unit_) != e) return false;
        }
        return true;
    }

    bool check_associative(unsigned seed, int samples) const {
        std::mt19937 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, dim_ - 1);
        for (int t = 0; t < samples; ++t) {
            Vec a = unit_vec(dim_, pick(rng)), b = unit_vec(dim_, pick(rng)), c = unit_vec(dim_, pick(rng));
            a[pick(rng)] += CycScalar(2);
            if (mul(mul(a, b), c) != mul(a, mul(b, c))) return false;
        }
        return true;
    }

    /// Images are multiplicative, unital, and invertible.
    bool check_images() const {
        if (images_[group_->identity()] != unit_) return false;
        for (std::size_t g = 0; g < group_->order(); ++g)
            for (std::size_t h = 0; h < group_->order(); ++h)
                if (mul(images_[g], images_[h]) != images_[group_->mul(static_cast<int>(g), static_cast<int>(h))]) return false;
        return true;
    }

private:
    std::size_t dim_;
    std::vector<SparseVec> table_;
    Vec unit_;
    std::shared_ptr<const ReflectionGroup> group_;
    std::vector<Vec> images_;
    std::string name_;
};

}  // namespace cmfactor
