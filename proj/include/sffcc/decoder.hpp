#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sffcc/lattice.hpp"

namespace sffcc {

// Fusion outcomes in the reference frame where every noiseless outcome is +1:
// kMinus marks a flipped outcome, kErased a lost one.
struct OutcomeAssignment {
    static constexpr uint8_t kPlus = 0, kMinus = 1, kErased = 2;
    std::vector<uint8_t> value; // one entry per slot

    explicit OutcomeAssignment(int n_slots = 0) : value(size_t(n_slots), kPlus) {}
};

enum class Verdict { Success, LogicalError, LogicalErasure };

// One sector's syndrome graph after merging checks across erased slots.
struct SupercellGraph {
    int sector = 0;
    int n_cells = 0;
    std::vector<int> cell_of_check; // per check; -1 outside the sector
    std::vector<int> slots;         // surviving (non-erased) slots of the sector
    std::vector<int> logical;       // rerouted erasure-free logical support
};

// Union checks across every erased slot of the sector and reroute the logical
// correlation operator off the erasure by multiplying checks into it.
// nullopt iff no erasure-free representative exists (logical erasure).
std::optional<SupercellGraph> merge_supercells(const SyndromeGraph &sg, int sector,
                                               const OutcomeAssignment &a,
                                               const std::vector<int> &logical);

// Supercell defect pattern: parity of -1 outcomes over each merged check.
std::vector<uint8_t> supercell_syndrome(const SyndromeGraph &sg, const SupercellGraph &sc,
                                        const OutcomeAssignment &a);

// Pair up defects along minimum-total-weight paths (unit edge weights) through
// the surviving slots; the returned slot set resolves the syndrome exactly.
// Throws on an odd defect count within a connected component.
std::vector<int> mwpm_decode(const SyndromeGraph &sg, const SupercellGraph &sc,
                             const std::vector<uint8_t> &defect);

// LogicalError iff correction XOR error has odd overlap with the logical.
Verdict adjudicate(const std::vector<int> &correction, const std::vector<int> &error_slots,
                   const std::vector<int> &logical);

// Full decode of both sectors against their tracked time-membrane logicals.
// Logical erasure is checked first; otherwise each sector is matched and
// adjudicated independently. Optional JSON dump for failure triage.
Verdict decode(const SyndromeGraph &sg, const OutcomeAssignment &a,
               std::string *dump_json = nullptr);

} // namespace sffcc
