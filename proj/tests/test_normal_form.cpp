#include <gtest/gtest.h>

#include <set>

#include "chainorder/face_lattice.hpp"
#include "chainorder/normal_form.hpp"
#include "oracles.hpp"

using namespace chainorder;

namespace {

// Global index of y^r_t.
int y(const Tau& tau, int r, int t) { return RankLayout(tau).index(r, t); }

std::uint64_t bits(std::initializer_list<int> positions) {
    std::uint64_t m = 0;
    for (int t : positions) m |= std::uint64_t{1} << (t - 1);
    return m;
}

Partition singletons_with(const Tau& tau, int k, std::vector<std::vector<int>> merged) {
    return detail::with_singletons(detail::NfShape(tau, k), std::move(merged));
}

FaceNormalForm plain(const Tau& tau, int k) {
    FaceNormalForm nf;
    nf.pi = singletons_with(tau, k, {});
    nf.zero_sets.assign(static_cast<std::size_t>(k), 0);
    nf.eq_sets.assign(static_cast<std::size_t>(k + 1), 0);
    return nf;
}

// Face partitions of the order part by validating every set partition.
std::set<Partition> brute_face_partitions(const Tau& tau, int k) {
    detail::NfShape s(tau, k);
    std::vector<int> ground;
    for (int x = 0; x <= s.n; ++x)
        if (s.in_order_part(x)) ground.push_back(x);
    std::set<Partition> out;
    for (auto blocks : oracle::set_partitions(ground)) {
        FaceNormalForm nf = plain(tau, k);
        nf.pi = Partition{std::move(blocks)}.canonicalize();
        if (validate_normal_form(nf, tau, k)) out.insert(nf.pi);
    }
    return out;
}

DoubleDescription chain_order_dd(const Tau& tau, int k) {
    DoubleDescription dd;
    dd.hrep = chain_order_hrep(tau, k);
    dd.vrep = zero_one_vertices(dd.hrep);
    return dd;
}

}  // namespace

TEST(NormalForm, SingleElementChain) {
    Tau tau{{1}};
    auto forms = enumerate_normal_forms(tau, 1);
    EXPECT_EQ(forms.size(), 3U);
    EXPECT_EQ(f_vector_from_forms(forms, tau, 1), (std::vector<std::uint64_t>{2}));
    EXPECT_EQ(f_vector_normal_form(tau, 1), (std::vector<std::uint64_t>{2}));
    EXPECT_EQ(f_vector_normal_form(tau, 0), (std::vector<std::uint64_t>{2}));
}

TEST(NormalForm, RunningExampleFace) {
    Tau tau{{5, 2, 1, 4, 2, 3}};
    const int k = 3;
    FaceNormalForm nf;
    nf.pi = singletons_with(tau, k, {{y(tau, 4, 2), y(tau, 5, 1), y(tau, 5, 2)}});
    nf.zero_sets = {0, bits({2}), 0};
    nf.eq_sets = {bits({2}), bits({1}), bits({1}), bits({1, 3})};
    nf.chain_tight = true;
    auto v = validate_normal_form(nf, tau, k);
    EXPECT_TRUE(v.valid) << v.message;
    EXPECT_EQ(codimension(nf, tau, k), 5);
    EXPECT_EQ(to_string(nf, tau, k), "pi={y4_2,y5_1,y5_2} F0[2]={y2_2} Feq[1]={y1_2} Feq[2]={y2_1} Feq[3]={y3_1} "
                                     "Feq[4]={y4_1,y4_3} chain");
}

TEST(NormalForm, ZeroRankMatchesGeometricFace) {
    Tau tau{{2, 2}};
    auto nf = plain(tau, 1);
    nf.zero_sets = {bits({1, 2})};
    EXPECT_EQ(codimension(nf, tau, 1), 2);
    auto dd = chain_order_dd(tau, 1);
    auto verts = vertices_of(nf, tau, 1, dd.vrep);
    auto inc = incidence_matrix(dd.vrep, dd.hrep);
    EXPECT_EQ(closure(inc, verts), verts);
    std::vector<Point> pts;
    verts.for_each([&](std::size_t i) { pts.push_back(dd.vrep.vertices[i]); });
    EXPECT_EQ(affine_rank(pts), 2U);
    for (const auto& p : pts) EXPECT_EQ(p[0] + p[1], 0);
}

TEST(NormalForm, VisitorMatchesBruteForce) {
    for (const auto& tau : oracle::compositions_up_to(7))
        for (int k = 0; k <= tau.length(); ++k) {
            std::set<Partition> seen;
            std::size_t calls = 0;
            for_each_face_partition(tau, k, [&](const Partition& pi) {
                ++calls;
                seen.insert(pi);
            });
            EXPECT_EQ(calls, seen.size());
            EXPECT_EQ(seen, brute_face_partitions(tau, k)) << tau.to_string() << " k=" << k;
        }
}

TEST(NormalForm, EnumeratedFormsAreValidAndDistinct) {
    for (const auto& tau : oracle::compositions_up_to(6))
        for (int k = 0; k <= tau.length(); ++k) {
            auto forms = enumerate_normal_forms(tau, k);
            EXPECT_TRUE(std::is_sorted(forms.begin(), forms.end()));
            EXPECT_EQ(std::set<FaceNormalForm>(forms.begin(), forms.end()).size(), forms.size());
            for (const auto& nf : forms) {
                auto v = validate_normal_form(nf, tau, k);
                EXPECT_TRUE(v.valid) << v.message;
            }
        }
}

TEST(NormalForm, DynamicProgramMatchesEnumeration) {
    for (const auto& tau : oracle::compositions_up_to(7))
        for (int k = 0; k <= tau.length(); ++k)
            EXPECT_EQ(f_vector_normal_form(tau, k), f_vector_from_forms(enumerate_normal_forms(tau, k), tau, k))
                << tau.to_string() << " k=" << k;
}

TEST(NormalForm, GeometricAgreement) {
    for (const auto& tau : oracle::compositions_up_to(5))
        for (int k = 0; k <= tau.length(); ++k) {
            auto dd = chain_order_dd(tau, k);
            EXPECT_EQ(f_vector_normal_form(tau, k), geometric_f_vector(dd.vrep, dd.hrep))
                << tau.to_string() << " k=" << k;
        }
}

TEST(NormalForm, VerticesOfIsBijectionOntoFaces) {
    for (const auto& tau : oracle::compositions_up_to(6))
        for (int k = 0; k <= tau.length(); ++k) {
            auto dd = chain_order_dd(tau, k);
            auto inc = incidence_matrix(dd.vrep, dd.hrep);
            auto fl = enumerate_faces(inc);
            std::map<DynamicBitset, int> dim_of;
            for (std::size_t i = 1; i < fl.size(); ++i) dim_of[fl.faces[i]] = fl.dim[i];
            auto forms = enumerate_normal_forms(tau, k);
            ASSERT_EQ(forms.size(), dim_of.size()) << tau.to_string() << " k=" << k;
            std::set<DynamicBitset> hit;
            for (const auto& nf : forms) {
                auto verts = vertices_of(nf, tau, k, dd.vrep);
                auto it = dim_of.find(verts);
                ASSERT_NE(it, dim_of.end()) << to_string(nf, tau, k);
                EXPECT_EQ(it->second, tau.total() - codimension(nf, tau, k)) << to_string(nf, tau, k);
                hit.insert(verts);
            }
            EXPECT_EQ(hit.size(), forms.size());
        }
}

TEST(Validation, Rejections) {
    Tau tau{{2, 2}};
    auto nf = plain(tau, 1);
    ASSERT_TRUE(validate_normal_form(nf, tau, 1).valid);

    auto bad = nf;
    bad.zero_sets.clear();
    EXPECT_FALSE(validate_normal_form(bad, tau, 1).valid);

    bad = nf;
    bad.zero_sets = {bits({3})};
    EXPECT_FALSE(validate_normal_form(bad, tau, 1).valid);

    bad = nf;
    bad.eq_sets = {bits({1}), bits({1})};
    EXPECT_FALSE(validate_normal_form(bad, tau, 1).valid);  // no tight chain

    bad.chain_tight = true;
    bad.zero_sets = {bits({1})};
    EXPECT_FALSE(validate_normal_form(bad, tau, 1).valid);  // eq meets zero

    bad = nf;
    bad.chain_tight = true;
    bad.eq_sets = {0, bits({1})};
    EXPECT_FALSE(validate_normal_form(bad, tau, 1).valid);  // free rank without eq set

    bad = nf;
    bad.pi = singletons_with(tau, 1, {{y(tau, 2, 1), y(tau, 2, 2)}});
    EXPECT_FALSE(validate_normal_form(bad, tau, 1).valid);  // one rank is not a face block

    bad = nf;
    bad.pi.blocks.push_back({y(tau, 1, 1)});
    EXPECT_FALSE(validate_normal_form(bad, tau, 1).valid);  // chain element in pi

    bad = nf;
    bad.pi = singletons_with(tau, 1, {{y(tau, 2, 1), y(tau, 2, 2), 4}});
    bad.chain_tight = true;
    bad.zero_sets = {bits({1, 2})};
    EXPECT_FALSE(validate_normal_form(bad, tau, 1).valid);  // empty face

    bad = nf;
    bad.chain_tight = true;
    bad.eq_sets = {bits({1}), 0};
    EXPECT_FALSE(validate_normal_form(bad, tau, 1).valid);  // singletons in Y^2 but empty eq set

    Tau one{{1}};
    auto top = plain(one, 1);
    top.chain_tight = true;
    top.zero_sets = {1};
    top.eq_sets = {0, 1};
    EXPECT_FALSE(validate_normal_form(top, one, 1).valid);
    top.zero_sets = {0};
    top.eq_sets = {1, 1};
    EXPECT_TRUE(validate_normal_form(top, one, 1).valid);
    top.eq_sets = {1, 0};
    EXPECT_FALSE(validate_normal_form(top, one, 1).valid);
}

TEST(Validation, Errors) {
    Tau tau{{2, 2}};
    auto bad = plain(tau, 1);
    bad.zero_sets.clear();
    EXPECT_THROW(codimension(bad, tau, 1), std::invalid_argument);
    EXPECT_THROW(enumerate_normal_forms(tau, 3), std::invalid_argument);
    EXPECT_THROW(f_vector_normal_form(Tau{{64, 1}}, 1), std::invalid_argument);
    EXPECT_THROW(enumerate_normal_forms(Tau{{3, 3, 3}}, 1, 10), BudgetExceeded);
}

TEST(Psi, TwoChainOrderToChain) {
    Tau tau{{1, 1}};
    std::set<FaceNormalForm> images;
    for (const auto& nf : enumerate_normal_forms(tau, 0)) {
        if (codimension(nf, tau, 0) < 2) {
            EXPECT_THROW(psi_map(nf, tau, 0), std::invalid_argument);
            continue;
        }
        auto img = psi_map(nf, tau, 0);
        EXPECT_TRUE(validate_normal_form(img, tau, 1).valid);
        EXPECT_EQ(codimension(img, tau, 1), 2);
        EXPECT_EQ(psi_inverse(img, tau, 0), nf);
        images.insert(img);
    }
    EXPECT_EQ(images.size(), 3U);
}

TEST(Psi, MergedFirstRankBecomesChain) {
    Tau tau{{1, 2, 2}};
    auto nf = plain(tau, 1);
    nf.pi = singletons_with(tau, 1, {{y(tau, 2, 1), y(tau, 2, 2), y(tau, 3, 2)}});
    ASSERT_EQ(codimension(nf, tau, 1), 2);
    auto img = psi_map(nf, tau, 1);
    EXPECT_TRUE(validate_normal_form(img, tau, 2).valid);
    EXPECT_TRUE(img.chain_tight);
    EXPECT_EQ(img.eq_sets[0], bits({1}));
    EXPECT_EQ(codimension(img, tau, 2), 2);
    EXPECT_EQ(psi_inverse(img, tau, 1), nf);
}

TEST(Psi, ArgumentErrors) {
    Tau tau{{2, 2}};
    EXPECT_THROW(psi_map(plain(tau, 2), tau, 2), std::invalid_argument);
    EXPECT_THROW(psi_map(plain(tau, 1), tau, 1), std::invalid_argument);
    EXPECT_THROW(verify_injection(tau, 2), std::invalid_argument);
}

TEST(Psi, InjectionSmallCases) {
    std::vector<std::pair<Tau, int>> cases{{Tau{{2, 2}}, 0}, {Tau{{2, 2}}, 1}};
    for (int k = 0; k < 3; ++k) cases.emplace_back(Tau{{1, 1, 1}}, k);
    for (const auto& [tau, k] : cases) {
        auto rep = verify_injection(tau, k);
        EXPECT_TRUE(rep.passed()) << tau.to_string() << " k=" << k << ": "
                                  << (rep.failures.empty() ? "" : rep.failures.front());
        for (std::size_t c = 2; c < rep.source_counts.size(); ++c) {
            EXPECT_EQ(rep.source_counts[c], rep.image_counts[c]);
            EXPECT_LE(rep.image_counts[c], rep.target_counts[c]);
        }
    }
}

TEST(Psi, InjectionUpToSix) {
    for (const auto& tau : oracle::compositions_up_to(6))
        for (int k = 0; k < tau.length(); ++k) {
            auto rep = verify_injection(tau, k);
            EXPECT_TRUE(rep.passed()) << tau.to_string() << " k=" << k;
        }
}

TEST(Monotone, ThreeTwos) {
    auto rep = verify_monotone(Tau{{2, 2, 2}});
    EXPECT_TRUE(rep.monotone);
    ASSERT_EQ(rep.f.size(), 4U);
    EXPECT_EQ(rep.f[0].front(), rep.f[3].front());
    EXPECT_TRUE(rep.failures.empty());
}
