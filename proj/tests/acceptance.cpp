// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "chainorder/chainorder.hpp"
#include "chainorder/cli.hpp"

using namespace chainorder;
using FVec = std::vector<std::uint64_t>;

namespace {

std::vector<Tau> compositions_up_to(int max_total) {
    std::vector<Tau> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int rest) {
        if (!cur.empty()) out.push_back(Tau{cur});
        for (int p = 1; p <= rest; ++p) {
            cur.push_back(p);
            rec(rest - p);
            cur.pop_back();
        }
    };
    rec(max_total);
    return out;
}

std::string str(const FVec& f) {
    std::string s = "(";
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
    return s + ")";
}

DoubleDescription chain_order_dd(const Tau& tau, int k) {
    DoubleDescription dd;
    dd.hrep = chain_order_hrep(tau, k);
    dd.vrep = zero_one_vertices(dd.hrep);
    return dd;
}

struct Check {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

Check ac1_golden_rows() {
    Check c;
    struct Row {
        Tau tau;
        int k;
        FVec f;
    };
    const FVec a{13, 74, 245, 526, 770, 784, 554, 265, 81, 14};
    const FVec seven{132, 964, 3097, 5708, 6692, 5222, 2744, 953, 206, 24};
    const std::vector<Row> rows{
        {Tau{{2, 2, 1, 1, 1, 1, 1, 1}}, 0, a},
        {Tau{{2, 2, 1, 1, 1, 1, 1, 1}}, 8, a},
        {Tau{{2, 2, 2, 2, 2}}, 0, {16, 110, 429, 1052, 1695, 1817, 1281, 572, 150, 20}},
        {Tau{{2, 2, 2, 2, 2}}, 5, {16, 110, 435, 1105, 1893, 2222, 1770, 920, 285, 42}},
        {Tau{{3, 3, 3, 1}}, 4, {23, 205, 949, 2542, 4206, 4446, 3018, 1281, 315, 37}},
        {Tau{{7, 2, 1}}, 0, seven},
        {Tau{{7, 2, 1}}, 3, seven},
    };
    for (const auto& r : rows) {
        auto dd = chain_order_dd(r.tau, r.k);
        auto g = geometric_f_vector(dd.vrep, dd.hrep);
        auto n = f_vector_normal_form(r.tau, r.k);
        if (g != r.f || n != r.f)
            c.fail(r.tau.to_string() + " k=" + std::to_string(r.k) + ": geometric " + str(g) + ", normal form " +
                   str(n) + ", expected " + str(r.f));
    }
    if (c.ok) c.detail = std::to_string(rows.size()) + " rows, both pipelines";
    return c;
}

Check ac2_full_table() {
    Check c;
    const std::string golden = std::string(CHAINORDER_TEST_DATA) + "/table_n10.csv";
    std::ostringstream out, err;
    int code = cli::run({"table", "--n", "10", "--method", "both", "--check", golden}, out, err);
    if (code != 0) c.fail("table exit " + std::to_string(code) + ": " + err.str());
    const auto expected = cli::read_golden(golden);
    if (expected.size() != 56) c.fail("golden file has " + std::to_string(expected.size()) + " rows");
    if (cli::table_shapes(10).size() != 28) c.fail("expected 28 shapes");
    std::ifstream in(golden);
    std::string want((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (out.str() != want) c.fail("table output differs from the golden file");
    if (c.ok) c.detail = "28 shapes x {order, chain}, geometric and normal form";
    return c;
}

Check ac3_running_example() {
    Check c;
    const Tau tau{{5, 2, 1, 4, 2, 3}};
    const FVec chain{61,      1306,    13935,   87979,   364142, 1053486, 2220180, 3500405, 4196664,
                     3857441, 2720641, 1462271, 589116, 172550, 34780,   4336,    257};
    const FVec order{61,      1306,   13459,  79115,  296362, 759353, 1393462, 1887296, 1922781,
                     1488969, 878903, 393545, 131842, 32207,  5492,   607,     38};
    auto fc = f_vector_normal_form(tau, tau.length());
    auto fo = f_vector_normal_form(tau, 0);
    if (fc != chain) c.fail("k=l: " + str(fc));
    if (fo != order) c.fail("k=0: " + str(fo));
    if (c.ok) c.detail = "17 entries at k=l and k=0";
    return c;
}

// Shared by AC4 and AC7: every (tau, k) with |tau| <= 7.
struct Instance {
    Tau tau;
    int k;
    DoubleDescription dd;
    FaceLattice fl;
};

std::vector<Instance> small_instances() {
    std::vector<Instance> out;
    for (const auto& tau : compositions_up_to(7))
        for (int k = 0; k <= tau.length(); ++k) {
            Instance in{tau, k, chain_order_dd(tau, k), {}};
            in.fl = enumerate_faces(incidence_matrix(in.dd.vrep, in.dd.hrep));
            out.push_back(std::move(in));
        }
    return out;
}

Check ac4_cross_pipeline(const std::vector<Instance>& instances) {
    Check c;
    for (const auto& in : instances) {
        auto g = f_vector(in.fl);
        auto n = f_vector_normal_form(in.tau, in.k);
        if (g != n)
            c.fail(in.tau.to_string() + " k=" + std::to_string(in.k) + ": geometric " + str(g) + " vs " + str(n));
    }
    if (c.ok) c.detail = std::to_string(instances.size()) + " (tau, k) pairs";
    return c;
}

Check ac5_main_theorem() {
    Check c;
    std::size_t maps = 0;
    for (const auto& tau : compositions_up_to(7)) {
        for (int k = 0; k < tau.length(); ++k) {
            auto r = verify_injection(tau, k);
            ++maps;
            if (!r.injective || !r.codim_preserved || !r.passed())
                c.fail(tau.to_string() + " k=" + std::to_string(k) + ": " +
                       (r.failures.empty() ? "report failed" : r.failures.front()));
        }
        auto m = verify_monotone(tau);
        if (!m.monotone) c.fail(tau.to_string() + ": " + m.failures.front());
    }
    if (c.ok) c.detail = std::to_string(maps) + " maps injective and codimension preserving; f monotone in k";
    return c;
}

std::vector<Poset> corpus() {
    std::vector<Poset> out;
    for (const auto& tau : compositions_up_to(8)) out.push_back(make_maximal_ranked(tau));
    std::mt19937_64 rng(20261016);
    std::uniform_int_distribution<int> size(1, 8);
    std::uniform_real_distribution<double> density(0.1, 0.7);
    for (int i = 0; i < 100; ++i) out.push_back(random_poset(size(rng), density(rng), rng()));
    return out;
}

Check ac6_stanley(const std::vector<Poset>& posets) {
    Check c;
    for (std::size_t i = 0; i < posets.size(); ++i) {
        auto o = order_polytope_dd(posets[i]), ch = chain_polytope_dd(posets[i]);
        if (o.vrep.size() != ch.vrep.size()) c.fail("poset " + std::to_string(i) + ": vertex counts differ");
        for (int t = 1; t <= 3; ++t)
            if (lattice_point_count(o.hrep, t) != lattice_point_count(ch.hrep, t))
                c.fail("poset " + std::to_string(i) + ": lattice points differ at t=" + std::to_string(t));
    }
    if (c.ok) c.detail = std::to_string(posets.size()) + " posets, t = 1, 2, 3";
    return c;
}

Check ac7_structure(const std::vector<Instance>& instances, const std::vector<Poset>& posets) {
    Check c;
    std::size_t faces = 0;
    for (const auto& in : instances) {
        const std::string where = in.tau.to_string() + " k=" + std::to_string(in.k);
        auto f = f_vector(in.fl);
        if (!euler_relation_holds(f)) c.fail(where + ": Euler relation");
        if (f.back() != in.dd.hrep.ineqs.size()) c.fail(where + ": facet count differs from row count");
        for (std::size_t i = 1; i < in.fl.size(); ++i, ++faces)
            if (static_cast<int>(affine_rank(face_points(in.fl, i, in.dd.vrep))) != in.fl.dim[i])
                c.fail(where + ": face dimension differs from affine rank");
        VRep exact;
        for (const auto& p : vertex_enum_exact(in.dd.hrep)) {
            if (!p.integral()) c.fail(where + ": fractional vertex");
            exact.vertices.push_back(p.num);
        }
        if (!(exact.canonicalize() == in.dd.vrep)) c.fail(where + ": 0/1 vertices differ from exact vertices");
    }
    for (std::size_t i = 0; i < posets.size(); ++i) {
        auto o = order_polytope_dd(posets[i]), ch = chain_polytope_dd(posets[i]);
        auto fo = geometric_f_vector(o.vrep, o.hrep), fc = geometric_f_vector(ch.vrep, ch.hrep);
        if (fo.size() > 1 && (fo[1] > fc[1] || fo.back() > fc.back()))
            c.fail("poset " + std::to_string(i) + ": order " + str(fo) + " exceeds chain " + str(fc));
        if (fo.size() > 1 && (!euler_relation_holds(fo) || !euler_relation_holds(fc)))
            c.fail("poset " + std::to_string(i) + ": Euler relation");
    }
    if (c.ok)
        c.detail = std::to_string(instances.size()) + " chain-order lattices (" + std::to_string(faces) + " faces), " +
                   std::to_string(posets.size()) + " order/chain pairs";
    return c;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](const char* id, const std::function<Check()>& body) {
        auto start = std::chrono::steady_clock::now();
        Check c;
        try {
            c = body();
        } catch (const std::exception& e) {
            c.fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << id << ' ' << (c.ok ? "PASS" : "FAIL") << " [" << static_cast<int>(secs * 10) / 10.0 << "s] "
                  << c.detail << std::endl;
        failures += !c.ok;
    };
    report("AC1", ac1_golden_rows);
    report("AC2", ac2_full_table);
    report("AC3", ac3_running_example);
    std::vector<Instance> instances;
    const auto posets = corpus();
    report("AC4", [&] {
        instances = small_instances();
        return ac4_cross_pipeline(instances);
    });
    report("AC5", ac5_main_theorem);
    report("AC6", [&] { return ac6_stanley(posets); });
    report("AC7", [&] { return ac7_structure(instances, posets); });
    return failures == 0 ? 0 : 1;
}
