#include "sffcc/stabilizer.hpp"

#include <algorithm>
#include <stdexcept>

#include "sffcc/gf2.hpp"

namespace sffcc {

namespace {

// Column order for canonical form: X block, then Z block.
size_t sym_col_count(const PauliOperator &p) { return 2 * p.n_qubits(); }

bool sym_get(const PauliOperator &p, size_t col) {
    size_t n = p.n_qubits();
    return col < n ? p.x_bits.get(col) : p.z_bits.get(col - n);
}

BitVec sym_bits(const PauliOperator &p) {
    size_t n = p.n_qubits();
    BitVec v(2 * n);
    for (size_t q = 0; q < n; ++q) {
        if (p.x_bits.get(q)) v.set(q, true);
        if (p.z_bits.get(q)) v.set(n + q, true);
    }
    return v;
}

// RREF over the generator list with sign-correct row operations.
void rref_paulis(std::vector<PauliOperator> &rows) {
    if (rows.empty()) return;
    size_t cols = sym_col_count(rows[0]);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows.size(); ++c) {
        size_t pivot = r;
        while (pivot < rows.size() && !sym_get(rows[pivot], c)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        for (size_t i = 0; i < rows.size(); ++i)
            if (i != r && sym_get(rows[i], c)) rows[i].multiply_inplace(rows[r]);
        ++r;
    }
    // Drop identity rows produced by dependent input generators.
    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [](const PauliOperator &p) { return p.is_identity_bits(); }),
               rows.end());
}

} // namespace

bool StabilizerGroup::is_valid() const {
    for (size_t i = 0; i < generators.size(); ++i)
        for (size_t j = i + 1; j < generators.size(); ++j)
            if (!generators[i].commutes(generators[j])) return false;
    std::vector<PauliOperator> rows = generators;
    size_t before = rows.size();
    rref_paulis(rows);
    if (rows.size() != before) return false; // dependent, or -I reachable
    for (const auto &p : rows)
        if (p.is_identity_bits()) return false;
    return true;
}

void StabilizerGroup::canonicalize() { rref_paulis(generators); }

bool StabilizerGroup::equals(const StabilizerGroup &other) const {
    StabilizerGroup a = *this, b = other;
    a.canonicalize();
    b.canonicalize();
    if (a.generators.size() != b.generators.size()) return false;
    for (size_t i = 0; i < a.generators.size(); ++i)
        if (!(a.generators[i] == b.generators[i])) return false;
    return true;
}

std::optional<bool> StabilizerGroup::contains_up_to_sign(const PauliOperator &p) const {
    StabilizerGroup canon = *this;
    canon.canonicalize();
    PauliOperator r = p;
    for (const auto &row : canon.generators) {
        BitVec bits = sym_bits(row);
        size_t lead = bits.lowest_set();
        if (sym_get(r, lead)) r.multiply_inplace(row);
    }
    if (!r.is_identity_bits()) return std::nullopt;
    // r = p * (member with same bits)^{-1}; equal signs leave +I.
    return !r.neg ? std::optional<bool>(p.neg) : std::optional<bool>(!p.neg);
}

bool StabilizerGroup::contains(const PauliOperator &p) const {
    auto sign = contains_up_to_sign(p);
    return sign.has_value() && *sign == p.neg;
}

StabilizerGroup StabilizerGroup::intersection(const StabilizerGroup &a, const StabilizerGroup &b) {
    if (a.n_qubits() != b.n_qubits() && !a.generators.empty() && !b.generators.empty())
        throw std::invalid_argument("qubit count mismatch in group intersection");
    size_t na = a.generators.size(), nb = b.generators.size();
    if (na == 0 || nb == 0) return StabilizerGroup{};
    Gf2Matrix m(na + nb, sym_col_count(a.generators[0]));
    for (size_t i = 0; i < na; ++i) m.row(i) = sym_bits(a.generators[i]);
    for (size_t i = 0; i < nb; ++i) m.row(na + i) = sym_bits(b.generators[i]);
    auto kernel = m.left_kernel();

    size_t n = a.generators[0].n_qubits();
    struct Candidate {
        PauliOperator op;
        bool sign_mismatch;
    };
    std::vector<Candidate> cands;
    for (const auto &k : kernel) {
        PauliOperator pa(n), pb(n);
        for (size_t i = 0; i < na; ++i)
            if (k.get(i)) pa.multiply_inplace(a.generators[i]);
        for (size_t i = 0; i < nb; ++i)
            if (k.get(na + i)) pb.multiply_inplace(b.generators[i]);
        cands.push_back({pa, pa.neg != pb.neg});
    }
    // Sign agreement is a linear condition over the kernel: fold mismatched
    // basis elements together and keep the sign-consistent subspace.
    std::optional<size_t> mismatch_pivot;
    for (size_t i = 0; i < cands.size(); ++i) {
        if (!cands[i].sign_mismatch) continue;
        if (!mismatch_pivot) {
            mismatch_pivot = i;
        } else {
            cands[i].op.multiply_inplace(cands[*mismatch_pivot].op);
            cands[i].sign_mismatch = false;
        }
    }
    std::vector<PauliOperator> gens;
    for (size_t i = 0; i < cands.size(); ++i)
        if (!cands[i].sign_mismatch) gens.push_back(cands[i].op);
    StabilizerGroup result(std::move(gens));
    result.canonicalize();
    return result;
}

StabilizerGroup StabilizerGroup::restricted_to(const std::vector<bool> &keep) const {
    std::vector<PauliOperator> rows = generators;
    if (rows.empty()) return StabilizerGroup{};
    size_t n = rows[0].n_qubits();
    // Eliminate support on removed qubits first, then keep only clean rows.
    auto get_col = [&](const PauliOperator &p, size_t q, bool zpart) {
        return zpart ? p.z_bits.get(q) : p.x_bits.get(q);
    };
    size_t r = 0;
    for (size_t q = 0; q < n; ++q) {
        if (keep[q]) continue;
        for (int zpart = 0; zpart < 2; ++zpart) {
            size_t pivot = r;
            while (pivot < rows.size() && !get_col(rows[pivot], q, zpart)) ++pivot;
            if (pivot == rows.size()) continue;
            std::swap(rows[r], rows[pivot]);
            for (size_t i = 0; i < rows.size(); ++i)
                if (i != r && get_col(rows[i], q, zpart)) rows[i].multiply_inplace(rows[r]);
            ++r;
        }
    }
    std::vector<size_t> kept;
    for (size_t q = 0; q < n; ++q)
        if (keep[q]) kept.push_back(q);
    std::vector<PauliOperator> clean;
    for (size_t i = r; i < rows.size(); ++i) {
        PauliOperator p(kept.size());
        p.neg = rows[i].neg;
        for (size_t j = 0; j < kept.size(); ++j) p.set_pauli(j, rows[i].pauli_at(kept[j]));
        clean.push_back(std::move(p));
    }
    StabilizerGroup result(std::move(clean));
    result.canonicalize();
    return result;
}

StabilizerState::StabilizerState(size_t n_qubits) : n_(n_qubits) {
    stab_.reserve(n_);
    destab_.reserve(n_);
    for (size_t i = 0; i < n_; ++i) {
        PauliOperator z(n_), x(n_);
        z.set_pauli(i, 3);
        x.set_pauli(i, 1);
        stab_.push_back(z);
        destab_.push_back(x);
    }
}

void StabilizerState::apply_h(size_t q) {
    auto upd = [&](PauliOperator &p) {
        bool x = p.x_bits.get(q), z = p.z_bits.get(q);
        p.neg ^= x && z;
        p.x_bits.set(q, z);
        p.z_bits.set(q, x);
    };
    for (auto &p : stab_) upd(p);
    for (auto &p : destab_) upd(p);
}

void StabilizerState::apply_cnot(size_t c, size_t t) {
    auto upd = [&](PauliOperator &p) {
        bool xc = p.x_bits.get(c), zc = p.z_bits.get(c);
        bool xt = p.x_bits.get(t), zt = p.z_bits.get(t);
        p.neg ^= xc && zt && (xt == zc);
        p.x_bits.set(t, xt ^ xc);
        p.z_bits.set(c, zc ^ zt);
    };
    for (auto &p : stab_) upd(p);
    for (auto &p : destab_) upd(p);
}

void StabilizerState::apply_cz(size_t a, size_t b) {
    apply_h(b);
    apply_cnot(a, b);
    apply_h(b);
}

void StabilizerState::apply_pauli(const PauliOperator &p) {
    for (auto &s : stab_)
        if (!s.commutes(p)) s.neg = !s.neg;
    for (auto &d : destab_)
        if (!d.commutes(p)) d.neg = !d.neg;
}

StabilizerState StabilizerState::graph_state(size_t n,
                                             const std::vector<std::pair<size_t, size_t>> &edges) {
    StabilizerState st(n);
    for (size_t q = 0; q < n; ++q) st.apply_h(q);
    for (auto [a, b] : edges) st.apply_cz(a, b);
    return st;
}

std::optional<int> StabilizerState::deterministic_outcome(const PauliOperator &p) const {
    for (const auto &s : stab_)
        if (!s.commutes(p)) return std::nullopt;
    PauliOperator prod(n_);
    for (size_t i = 0; i < n_; ++i)
        if (!destab_[i].commutes(p)) prod.multiply_inplace(stab_[i]);
    if (!(prod.x_bits == p.x_bits && prod.z_bits == p.z_bits))
        throw std::logic_error("tableau invariant broken: commuting Pauli not in group");
    return prod.neg == p.neg ? +1 : -1;
}

int StabilizerState::measure(const PauliOperator &p, std::optional<int> forced, Rng *rng) {
    if (p.n_qubits() != n_) throw std::invalid_argument("measurement operator size mismatch");
    auto det = deterministic_outcome(p);
    if (det) {
        if (forced && *forced != *det)
            throw std::runtime_error("forced outcome contradicts deterministic measurement");
        record_.push_back(*det);
        return *det;
    }
    size_t pivot = n_;
    for (size_t i = 0; i < n_; ++i) {
        if (!stab_[i].commutes(p)) {
            pivot = i;
            break;
        }
    }
    int outcome;
    if (forced) {
        outcome = *forced;
    } else if (rng) {
        outcome = rng->next_bool() ? -1 : +1;
    } else {
        throw std::invalid_argument("random measurement outcome requires an RNG or forced value");
    }
    for (size_t i = 0; i < n_; ++i) {
        if (i != pivot && !stab_[i].commutes(p)) stab_[i].multiply_inplace(stab_[pivot]);
        if (i != pivot && !destab_[i].commutes(p)) destab_[i].multiply_inplace(stab_[pivot]);
    }
    destab_[pivot] = stab_[pivot];
    stab_[pivot] = p;
    stab_[pivot].neg = p.neg ^ (outcome < 0);
    record_.push_back(outcome);
    return outcome;
}

StabilizerGroup StabilizerState::stabilizer_group() const { return StabilizerGroup(stab_); }

} // namespace sffcc
