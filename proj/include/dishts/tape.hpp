#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dishts/error.hpp"
#include "dishts/tensor.hpp"

namespace dishts {

/// Flat collection of learnable tensors with paired gradient buffers.
/// Parameter values are read-shared during forward passes; gradients are
/// written only through Tape::backward on the owning thread.
class ParamStore {
public:
    std::size_t add(std::string name, Tensor init) {
        names_.push_back(std::move(name));
        grads_.push_back(Tensor::zeros_like(init));
        values_.push_back(std::move(init));
        return values_.size() - 1;
    }

    std::size_t size() const noexcept { return values_.size(); }

    const std::string& name(std::size_t i) const { return names_[i]; }
    Tensor& value(std::size_t i) { return values_[i]; }
    const Tensor& value(std::size_t i) const { return values_[i]; }
    Tensor& grad(std::size_t i) { return grads_[i]; }
    const Tensor& grad(std::size_t i) const { return grads_[i]; }

    void zero_grads() {
        for (auto& g : grads_)
            for (auto& x : g.vec()) x = 0.0;
    }

    /// Deep copy of all parameter values, for checkpoints and restore.
    std::vector<Tensor> snapshot() const { return values_; }

    void restore(const std::vector<Tensor>& snap) {
        if (snap.size() != values_.size())
            throw Error::internal("param store: snapshot size mismatch");
        for (std::size_t i = 0; i < snap.size(); ++i) {
            if (!snap[i].same_shape(values_[i]))
                throw Error::internal("param store: snapshot shape mismatch for " + names_[i]);
            values_[i] = snap[i];
        }
    }

private:
    std::vector<std::string> names_;
    std::vector<Tensor> values_;
    std::vector<Tensor> grads_;
};

/// Handle to one value slot on a Tape.
struct Var {
    std::size_t slot = static_cast<std::size_t>(-1);
};

/// Reverse-mode gradient tape over a small closed set of primitives.
/// Nodes are recorded in topological (creation) order; backward visits each
/// node at most once and accumulates d(loss)/d(param) into the bound
/// ParamStore gradient buffers. Consecutive backward calls without a
/// ParamStore::zero_grads accumulate, by design.
///
/// A tape and its tensors are one single-threaded unit of work.
class Tape {
public:
    /// Constant input; gradients stop here.
    Var leaf(Tensor v) { return push(Op::Leaf, kNone, kNone, 0.0, nullptr, 0, std::move(v)); }

    Var leaf(double v) { return leaf(Tensor::scalar(v)); }

    /// Learnable leaf bound to a ParamStore entry (value copied in).
    Var param(ParamStore& store, std::size_t index) {
        return push(Op::Param, kNone, kNone, 0.0, &store, index, store.value(index));
    }

    Var add(Var a, Var b) { return binary(Op::Add, a, b, "add"); }
    Var sub(Var a, Var b) { return binary(Op::Sub, a, b, "sub"); }
    Var mul(Var a, Var b) { return binary(Op::Mul, a, b, "mul"); }
    Var div(Var a, Var b) { return binary(Op::Div, a, b, "div"); }

    /// m: [R x C], v: [C] -> [R].
    Var matvec(Var m, Var v) {
        const Tensor& tm = value(m);
        const Tensor& tv = value(v);
        if (tm.rank() != 2 || tv.rank() != 1 || tm.cols() != tv.numel()) {
            throw Error::internal("matvec: shape mismatch " + shape_str(tm.shape()) + " vs " +
                                  shape_str(tv.shape()));
        }
        Tensor out = Tensor::zeros(Shape{tm.rows()});
        for (std::size_t r = 0; r < tm.rows(); ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < tm.cols(); ++c) acc += tm(r, c) * tv.at(c);
            out.at(r) = acc;
        }
        out.check_finite("matvec");
        return push(Op::MatVec, m.slot, v.slot, 0.0, nullptr, 0, std::move(out));
    }

    Var sum(Var a) { return reduce(Op::Sum, a, "sum"); }
    Var mean(Var a) { return reduce(Op::Mean, a, "mean"); }

    Var sqrt(Var a) {
        const Tensor& ta = value(a);
        Tensor out = Tensor::zeros(ta.shape());
        for (std::size_t i = 0; i < ta.numel(); ++i) out.at(i) = std::sqrt(ta.at(i));
        out.check_finite("sqrt");
        return push(Op::Sqrt, a.slot, kNone, 0.0, nullptr, 0, std::move(out));
    }

    Var square(Var a) {
        const Tensor& ta = value(a);
        Tensor out = Tensor::zeros(ta.shape());
        for (std::size_t i = 0; i < ta.numel(); ++i) out.at(i) = ta.at(i) * ta.at(i);
        out.check_finite("square");
        return push(Op::Square, a.slot, kNone, 0.0, nullptr, 0, std::move(out));
    }

    Var leaky_relu(Var a, double slope = 0.01) {
        const Tensor& ta = value(a);
        Tensor out = Tensor::zeros(ta.shape());
        for (std::size_t i = 0; i < ta.numel(); ++i) {
            double x = ta.at(i);
            out.at(i) = x >= 0.0 ? x : slope * x;
        }
        out.check_finite("leaky_relu");
        return push(Op::LeakyRelu, a.slot, kNone, slope, nullptr, 0, std::move(out));
    }

    /// max(a, c) built from the primitive set: leaky_relu with slope 0 is a
    /// plain relu, so max(x, c) = relu(x - c) + c.
    Var floor_at(Var a, double c) {
        Var cvar = leaf(c);
        return add(leaky_relu(sub(a, cvar), 0.0), cvar);
    }

    const Tensor& value(Var v) const { return values_[v.slot]; }

    /// d(loss)/d(v) from the most recent backward; exact zeros for slots
    /// with no path to the loss.
    const Tensor& adjoint(Var v) const {
        if (v.slot >= adjoints_.size())
            throw Error::internal("tape: adjoint requested before backward");
        return adjoints_[v.slot];
    }

    std::size_t node_count() const noexcept { return nodes_.size(); }

    /// Reverse sweep from a scalar loss. Every param slot reachable from the
    /// loss adds its gradient into the bound ParamStore entry.
    void backward(Var loss) {
        const Tensor& lv = value(loss);
        if (!lv.is_scalar())
            throw Error::internal("backward: loss must be scalar, got " + shape_str(lv.shape()));

        adjoints_.clear();
        adjoints_.reserve(values_.size());
        for (const Tensor& t : values_) adjoints_.push_back(Tensor::zeros(t.shape()));
        adjoints_[loss.slot].at(0) = 1.0;

        for (std::size_t i = loss.slot + 1; i-- > 0;) {
            const Node& n = nodes_[i];
            const Tensor& g = adjoints_[i];
            switch (n.op) {
                case Op::Leaf:
                    break;
                case Op::Param: {
                    Tensor& pg = n.store->grad(n.param_index);
                    for (std::size_t k = 0; k < pg.numel(); ++k) pg.at(k) += g.at(k);
                    break;
                }
                case Op::Add:
                    for (std::size_t k = 0; k < g.numel(); ++k) {
                        bump(n.a, k, g.at(k));
                        bump(n.b, k, g.at(k));
                    }
                    break;
                case Op::Sub:
                    for (std::size_t k = 0; k < g.numel(); ++k) {
                        bump(n.a, k, g.at(k));
                        bump(n.b, k, -g.at(k));
                    }
                    break;
                case Op::Mul:
                    for (std::size_t k = 0; k < g.numel(); ++k) {
                        bump(n.a, k, g.at(k) * operand(n.b, k));
                        bump(n.b, k, g.at(k) * operand(n.a, k));
                    }
                    break;
                case Op::Div:
                    for (std::size_t k = 0; k < g.numel(); ++k) {
                        double bv = operand(n.b, k);
                        bump(n.a, k, g.at(k) / bv);
                        bump(n.b, k, -g.at(k) * operand(n.a, k) / (bv * bv));
                    }
                    break;
                case Op::MatVec: {
                    const Tensor& m = values_[n.a];
                    const Tensor& v = values_[n.b];
                    Tensor& ma = adjoints_[n.a];
                    Tensor& va = adjoints_[n.b];
                    for (std::size_t r = 0; r < m.rows(); ++r) {
                        double gr = g.at(r);
                        for (std::size_t c = 0; c < m.cols(); ++c) {
                            ma(r, c) += gr * v.at(c);
                            va.at(c) += gr * m(r, c);
                        }
                    }
                    break;
                }
                case Op::Sum: {
                    Tensor& aa = adjoints_[n.a];
                    for (std::size_t k = 0; k < aa.numel(); ++k) aa.at(k) += g.at(0);
                    break;
                }
                case Op::Mean: {
                    Tensor& aa = adjoints_[n.a];
                    double scale = g.at(0) / static_cast<double>(aa.numel());
                    for (std::size_t k = 0; k < aa.numel(); ++k) aa.at(k) += scale;
                    break;
                }
                case Op::Sqrt: {
                    // d sqrt(x) = 1/(2 sqrt(x)); clamped at zero by the
                    // shared eps floor.
                    const Tensor& out = values_[i];
                    Tensor& aa = adjoints_[n.a];
                    for (std::size_t k = 0; k < aa.numel(); ++k) {
                        double denom = 2.0 * std::max(out.at(k), kEpsFloor);
                        aa.at(k) += g.at(k) / denom;
                    }
                    break;
                }
                case Op::Square: {
                    const Tensor& in = values_[n.a];
                    Tensor& aa = adjoints_[n.a];
                    for (std::size_t k = 0; k < aa.numel(); ++k)
                        aa.at(k) += g.at(k) * 2.0 * in.at(k);
                    break;
                }
                case Op::LeakyRelu: {
                    const Tensor& in = values_[n.a];
                    Tensor& aa = adjoints_[n.a];
                    for (std::size_t k = 0; k < aa.numel(); ++k)
                        aa.at(k) += g.at(k) * (in.at(k) >= 0.0 ? 1.0 : n.slope);
                    break;
                }
            }
        }
    }

private:
    enum class Op { Leaf, Param, Add, Sub, Mul, Div, MatVec, Sum, Mean, Sqrt, Square, LeakyRelu };

    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    struct Node {
        Op op;
        std::size_t a;
        std::size_t b;
        double slope;
        ParamStore* store;
        std::size_t param_index;
    };

    Var push(Op op, std::size_t a, std::size_t b, double slope, ParamStore* store,
             std::size_t param_index, Tensor out) {
        nodes_.push_back(Node{op, a, b, slope, store, param_index});
        values_.push_back(std::move(out));
        return Var{values_.size() - 1};
    }

    /// Elementwise binary op on matched shapes, or one scalar operand
    /// broadcast against the other. No wider broadcasting.
    Var binary(Op op, Var a, Var b, const char* name) {
        const Tensor& ta = value(a);
        const Tensor& tb = value(b);
        const bool a_scalar = ta.is_scalar();
        const bool b_scalar = tb.is_scalar();
        if (!ta.same_shape(tb) && !a_scalar && !b_scalar) {
            throw Error::internal(std::string(name) + ": shape mismatch " + shape_str(ta.shape()) +
                                  " vs " + shape_str(tb.shape()));
        }
        const Tensor& ref = a_scalar ? tb : ta;
        Tensor out = Tensor::zeros(ref.shape());
        for (std::size_t k = 0; k < out.numel(); ++k) {
            double av = ta.at(a_scalar ? 0 : k);
            double bv = tb.at(b_scalar ? 0 : k);
            switch (op) {
                case Op::Add: out.at(k) = av + bv; break;
                case Op::Sub: out.at(k) = av - bv; break;
                case Op::Mul: out.at(k) = av * bv; break;
                case Op::Div: out.at(k) = av / bv; break;
                default: break;
            }
        }
        out.check_finite(name);
        return push(op, a.slot, b.slot, 0.0, nullptr, 0, std::move(out));
    }

    Var reduce(Op op, Var a, const char* name) {
        const Tensor& ta = value(a);
        double acc = 0.0;
        for (std::size_t k = 0; k < ta.numel(); ++k) acc += ta.at(k);
        if (op == Op::Mean) acc /= static_cast<double>(ta.numel());
        Tensor out = Tensor::scalar(acc);
        out.check_finite(name);
        return push(op, a.slot, kNone, 0.0, nullptr, 0, std::move(out));
    }

    /// Operand value at flat index k, honoring scalar broadcast.
    double operand(std::size_t slot, std::size_t k) const {
        const Tensor& t = values_[slot];
        return t.at(t.is_scalar() ? 0 : k);
    }

    /// Accumulate into the adjoint of `slot` at flat index k, reducing onto
    /// index 0 when the operand was a broadcast scalar.
    void bump(std::size_t slot, std::size_t k, double v) {
        Tensor& adj = adjoints_[slot];
        adj.at(adj.is_scalar() ? 0 : k) += v;
    }

    std::vector<Node> nodes_;
    std::vector<Tensor> values_;
    std::vector<Tensor> adjoints_;
};

}  // namespace dishts
