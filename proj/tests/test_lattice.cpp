#include <doctest.h>

#include <json.hpp>
#include <set>

#include "sffcc/gf2.hpp"
#include "sffcc/lattice.hpp"

using namespace sffcc;

TEST_CASE("network geometry invariants") {
    CHECK_THROWS_AS(FusionNetwork(1), std::invalid_argument);
    CHECK_THROWS_AS(FusionNetwork(3), std::invalid_argument);

    for (int L : {2, 4}) {
        FusionNetwork net(L);
        CHECK(net.layers() == 3 * L);
        CHECK(net.n_vertices() == 6 * L * L);
        CHECK(net.n_fusions() == 9 * L * L * L);
        CHECK(net.n_photons() == 2 * net.n_fusions());

        // torus identifications preserve vertices
        CHECK(net.vertex_id(0, 0, 0) == net.vertex_id(3 * L, 0, 0));
        CHECK(net.vertex_id(0, 0, 1) == net.vertex_id(L, L, 1));
        CHECK(net.vertex_id(-1, -1, 0) == net.vertex_id(L - 1, L - 1, 0));

        // bond colors form perfect matchings; partners are mutual
        for (int v = 0; v < net.n_vertices(); ++v) {
            auto nb = net.neighbors_by_color(v);
            CHECK(std::set<int>(nb.begin(), nb.end()).size() == 3);
            for (int c = 0; c < 3; ++c) {
                CHECK(nb[c] % 2 != v % 2);
                CHECK(net.neighbors_by_color(nb[c])[c] == v);
            }
        }

        // layer t fuses every vertex across its color-(t%3) bond, exactly once
        std::vector<int> per_layer(net.layers(), 0);
        for (const auto &f : net.fusions()) {
            CHECK(f.color == f.layer % 3);
            CHECK(net.photon_layer(f.photon_a) == f.layer);
            CHECK(net.photon_layer(f.photon_b) == f.layer);
            int va = net.photon_vertex(f.photon_a), vb = net.photon_vertex(f.photon_b);
            CHECK(net.neighbors_by_color(va)[f.color] == vb);
            per_layer[f.layer]++;
        }
        for (int n : per_layer) CHECK(n == 3 * L * L);
        for (int p = 0; p < net.n_photons(); ++p) {
            const auto &f = net.fusions()[net.fusion_of_photon(p)];
            CHECK((f.photon_a == p || f.photon_b == p));
        }
    }
}

TEST_CASE("emitter resource state is a Hadamard-flagged periodic ring") {
    FusionNetwork net(2);
    auto g = net.ring_graph();
    CHECK(g.vertex_count() == 6);
    for (int t = 0; t < 6; ++t) {
        CHECK(g.hadamard(t));
        auto nb = g.neighbors(t);
        CHECK(nb.size() == 2);
        CHECK(nb.count((t + 1) % 6) == 1);
        CHECK(nb.count((t + 5) % 6) == 1);
    }
}

TEST_CASE("syndrome graph structure") {
    for (int L : {2, 4}) {
        FusionNetwork net(L);
        auto sg = derive_syndrome_graph(net); // self-verifies membership in R
        CHECK(sg.checks.size() == size_t(3 * L * L * L));
        CHECK(sg.n_slots == net.n_slots());

        std::multiset<std::pair<int, int>> shape0;
        for (const auto &ck : sg.checks) {
            CHECK(ck.sector == ck.anchor_layer % 2);
            std::set<int> uniq(ck.slots.begin(), ck.slots.end());
            CHECK(uniq.size() == 12);
            int n_xx = 0;
            std::multiset<std::pair<int, int>> shape; // (type, layer offset)
            for (int s : ck.slots) {
                if (s % 2 == 0) ++n_xx;
                int layer = net.fusions()[s / 2].layer;
                shape.insert({s % 2, ((layer - ck.anchor_layer) % net.layers() +
                                      net.layers()) % net.layers()});
                CHECK(sg.slot_sector[s] == ck.sector);
            }
            CHECK(n_xx == 6);
            if (shape0.empty()) shape0 = shape;
            CHECK(shape == shape0); // translation invariance
        }

        for (int s = 0; s < sg.n_slots; ++s) {
            auto [c0, c1] = sg.slot_checks[s];
            CHECK(c0 != c1);
            CHECK(std::count(sg.checks[c0].slots.begin(), sg.checks[c0].slots.end(), s) == 1);
            CHECK(std::count(sg.checks[c1].slots.begin(), sg.checks[c1].slots.end(), s) == 1);
        }
        // each fusion feeds its two outcomes into opposite sectors
        for (int f = 0; f < net.n_fusions(); ++f)
            CHECK(sg.slot_sector[2 * f] != sg.slot_sector[2 * f + 1]);
    }
}

TEST_CASE("logical sheets are independent of checks and sector-pure") {
    int L = 2;
    SUBCASE("L = 2") { L = 2; }
    SUBCASE("L = 4") { L = 4; }
    FusionNetwork net(L);
    auto sg = derive_syndrome_graph(net);

    Gf2Matrix span(0, sg.n_slots);
    for (const auto &ck : sg.checks) {
        BitVec v(sg.n_slots);
        for (int s : ck.slots) v.flip(size_t(s));
        span.add_row(v);
    }
    size_t rank = span.rank();
    CHECK(rank == sg.checks.size() - 2); // one redundancy per sector

    for (int sec = 0; sec < 2; ++sec)
        for (const auto *lg : {&sg.logicals[sec].space_u, &sg.logicals[sec].space_v}) {
            CHECK(!lg->empty());
            for (int s : *lg) CHECK(sg.slot_sector[s] == sec);
            BitVec v(sg.n_slots);
            for (int s : *lg) v.flip(size_t(s));
            CHECK(!span.in_row_span(v));
            span.add_row(v);
            CHECK(span.rank() == ++rank);
        }
    // sectors are slot-disjoint, so cross-sector overlaps vanish; within a
    // sector the two sheets are inequivalent classes (checked above)
}

TEST_CASE("exhaustive oracle confirms the derived checks at L = 2") {
    FusionNetwork net(2);
    auto sg = derive_syndrome_graph(net);

    auto rep = verify_small_instance(net, sg);
    INFO(rep.detail);
    CHECK(rep.ok);
    CHECK(rep.detail.find("dim C = 28") != std::string::npos);
    CHECK(rep.detail.find("check rank 22") != std::string::npos);

    SUBCASE("negative control: un-rotated fusion basis") {
        VerifyOptions opts;
        opts.unrotate_fusion = 7;
        auto bad = verify_small_instance(net, sg, opts);
        CHECK(!bad.ok);
        CHECK(bad.detail.find("check") != std::string::npos);
        CHECK(bad.detail.find("face") != std::string::npos);
    }
    SUBCASE("negative control: dropped Hadamard flag") {
        VerifyOptions opts;
        opts.drop_hadamard_ring = 0;
        opts.drop_hadamard_layer = 2;
        auto bad = verify_small_instance(net, sg, opts);
        CHECK(!bad.ok);
        CHECK(bad.detail.find("check") != std::string::npos);
    }
}

TEST_CASE("syndrome graph JSON export") {
    FusionNetwork net(2);
    auto sg = derive_syndrome_graph(net);
    auto j = nlohmann::json::parse(sg.to_json());
    CHECK(j["L"] == 2);
    CHECK(j["checks"].size() == sg.checks.size());
    CHECK(j["slots"].size() == size_t(sg.n_slots));
    CHECK(j["slots"][0]["type"] == "XX");
    CHECK(j["slots"][1]["type"] == "ZZ");
    CHECK(j["slots"][4]["checks"].size() == 2);
    CHECK(j["logicals"]["primal"]["space_u"].size() == sg.logicals[0].space_u.size());
    CHECK(j["logicals"]["dual"]["space_v"].size() == sg.logicals[1].space_v.size());
}
