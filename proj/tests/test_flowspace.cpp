#include <doctest.h>

#include <algorithm>

#include "bloomflow/flowspace.hpp"

using namespace bloomflow;

TEST_CASE("ipv4 parsing and formatting") {
    CHECK(parse_ipv4("192.168.1.1") == 0xC0A80101u);
    CHECK(parse_ipv4("0.0.0.0") == 0u);
    CHECK(parse_ipv4("255.255.255.255") == 0xFFFFFFFFu);
    CHECK(ipv4_to_string(0xC0A80101u) == "192.168.1.1");

    for (const char* bad : {"abc", "1.2.3", "1.2.3.4.5", "256.1.1.1", "1..2.3",
                            "1.2.3.4.", ".1.2.3.4", "1.2.3.x", ""}) {
        CHECK_THROWS_AS(parse_ipv4(bad), std::invalid_argument);
    }
}

TEST_CASE("flow key concatenates source above destination") {
    FlowId flow = make_flow_id("192.168.1.1", "10.0.0.1");
    // Independent 128-bit oracle for src * 2^32 + dst.
    unsigned __int128 wide =
        static_cast<unsigned __int128>(0xC0A80101u) * ((unsigned __int128)1 << 32) +
        0x0A000001u;
    CHECK(flow.key() == 0xC0A801010A000001ull);
    CHECK(static_cast<unsigned __int128>(flow.key()) == wide);
    CHECK(flow.str() == "192.168.1.1.10.0.0.1");

    CHECK(make_flow_id("0.0.0.0", "0.0.0.0").key() == 0);
    FlowId low_src = make_flow_id("0.0.0.1", "0.0.0.0");
    CHECK(low_src.key() == (1ull << 32));
    // sorts after every (0.0.0.0, *) flow
    CHECK(low_src.key() > make_flow_id("0.0.0.0", "255.255.255.255").key());
}

TEST_CASE("key order equals lexicographic (src, dst) order") {
    RandomStream rng(17);
    for (int i = 0; i < 2000; ++i) {
        FlowId a{static_cast<std::uint32_t>(rng.next_u64()),
                 static_cast<std::uint32_t>(rng.next_u64())};
        FlowId b{static_cast<std::uint32_t>(rng.next_u64()),
                 static_cast<std::uint32_t>(rng.next_u64())};
        bool lex = a.src < b.src || (a.src == b.src && a.dst < b.dst);
        CHECK((a.key() < b.key()) == lex);
    }
}

TEST_CASE("flow space sorts, deduplicates and indexes") {
    auto flow = [](std::uint64_t key) {
        return FlowId{static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(key & 0xFFFFFFFFull)};
    };
    SortedFlowSpace space({flow(5), flow(3), flow(3), flow(9)});
    REQUIRE(space.size() == 3);
    CHECK(space.at(0).key() == 3);
    CHECK(space.at(1).key() == 5);
    CHECK(space.at(2).key() == 9);
    for (std::size_t i = 0; i < space.size(); ++i)
        CHECK(space.position(space.at(i)) == i);
    CHECK_FALSE(space.position(flow(4)).has_value());

    // already-sorted unique input keeps its order
    std::vector<FlowId> sorted = {flow(1), flow(2), flow(7)};
    SortedFlowSpace space2(sorted);
    CHECK(space2.flows() == sorted);
}

namespace {

SortedFlowSpace consecutive_space(std::size_t n) {
    std::vector<FlowId> flows;
    flows.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        flows.push_back(FlowId{1, static_cast<std::uint32_t>(i)});
    return SortedFlowSpace(flows);
}

}  // namespace

TEST_CASE("window sampling") {
    SortedFlowSpace space = consecutive_space(400);

    SUBCASE("half the window is inserted") {
        LocalityWindow w30 = sample_window(space, 30, 1);
        CHECK(w30.inserted.size() == 15);
        LocalityWindow w64 = sample_window(space, 64, 2);
        CHECK(w64.inserted.size() == 32);
        CHECK(w64.center == w64.start + 32);
        for (const auto& f : w64.inserted) {
            auto pos = space.position(f);
            REQUIRE(pos.has_value());
            CHECK(*pos >= w64.start);
            CHECK(*pos < w64.start + w64.size);
        }
        // no duplicates among inserted
        auto keys = w64.inserted;
        std::sort(keys.begin(), keys.end());
        CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
    }

    SUBCASE("window bounds stay inside the space") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            LocalityWindow w = sample_window(space, 110, seed);
            CHECK(w.start + w.size <= space.size());
        }
    }

    SUBCASE("two-flow space forces start zero") {
        SortedFlowSpace tiny = consecutive_space(2);
        LocalityWindow w = sample_window(tiny, 2, 123);
        CHECK(w.start == 0);
        CHECK(w.inserted.size() == 1);
    }

    SUBCASE("size limits are enforced") {
        CHECK_THROWS_AS(sample_window(space, 401, 1), std::invalid_argument);
        CHECK_THROWS_AS(sample_window(space, 1, 1), std::invalid_argument);
    }

    SUBCASE("same seed reproduces the window") {
        LocalityWindow a = sample_window(space, 50, 777);
        LocalityWindow b = sample_window(space, 50, 777);
        CHECK(a.start == b.start);
        CHECK(a.inserted == b.inserted);
    }
}

TEST_CASE("mean center distance") {
    SortedFlowSpace space = consecutive_space(500);

    SUBCASE("no detections reports absent means") {
        LocalityWindow w = sample_window(space, 30, 5);
        CenterDistances d = mean_center_distance(space, w, {});
        CHECK(d.tp_count == 0);
        CHECK(d.fp_count == 0);
        CHECK_FALSE(d.mean_tp_dist.has_value());
        CHECK_FALSE(d.mean_fp_dist.has_value());
    }

    SUBCASE("single false positive at center + 200") {
        LocalityWindow w;
        w.start = 0;
        w.size = 30;
        w.center = 15;
        w.inserted = {};
        CenterDistances d = mean_center_distance(space, w, {space.at(215)});
        CHECK(d.fp_count == 1);
        CHECK(d.mean_fp_dist == doctest::Approx(200.0));
        CHECK(d.tp_count == 0);
    }

    SUBCASE("detected equals inserted gives zero false positives") {
        LocalityWindow w;
        w.start = 0;
        w.size = 30;
        w.center = 15;
        // symmetric offsets around the center
        w.inserted = {space.at(10), space.at(20), space.at(13), space.at(17)};
        CenterDistances d = mean_center_distance(space, w, w.inserted);
        CHECK(d.fp_count == 0);
        CHECK(d.tp_count == 4);
        CHECK(d.mean_tp_dist == doctest::Approx((5 + 5 + 2 + 2) / 4.0));
    }

    SUBCASE("whole window stays within ceil(W/2) of the center") {
        LocalityWindow w = sample_window(space, 65, 3);
        std::vector<FlowId> whole;
        for (std::size_t i = w.start; i < w.start + w.size; ++i) whole.push_back(space.at(i));
        CenterDistances d = mean_center_distance(space, w, whole);
        double max_dist = 0;
        for (const auto& f : whole) {
            double dist = std::abs(static_cast<double>(*space.position(f)) -
                                   static_cast<double>(w.center));
            max_dist = std::max(max_dist, dist);
        }
        CHECK(max_dist <= (w.size + 1) / 2);
        CHECK(*d.mean_detected_dist <= max_dist);
    }

    SUBCASE("translation invariance") {
        LocalityWindow w;
        w.start = 100;
        w.size = 20;
        w.center = 110;
        w.inserted = {space.at(104), space.at(112)};
        std::vector<FlowId> detected = {space.at(104), space.at(112), space.at(140)};
        CenterDistances base = mean_center_distance(space, w, detected);

        constexpr std::size_t shift = 37;
        LocalityWindow w2;
        w2.start = w.start + shift;
        w2.size = w.size;
        w2.center = w.center + shift;
        w2.inserted = {space.at(104 + shift), space.at(112 + shift)};
        std::vector<FlowId> detected2 = {space.at(104 + shift), space.at(112 + shift),
                                         space.at(140 + shift)};
        CenterDistances shifted = mean_center_distance(space, w2, detected2);

        CHECK(*base.mean_tp_dist == doctest::Approx(*shifted.mean_tp_dist));
        CHECK(*base.mean_fp_dist == doctest::Approx(*shifted.mean_fp_dist));
    }

    SUBCASE("detected flows must belong to the space") {
        LocalityWindow w = sample_window(space, 30, 5);
        CHECK_THROWS_AS(mean_center_distance(space, w, {FlowId{99, 99}}),
                        std::invalid_argument);
    }
}
