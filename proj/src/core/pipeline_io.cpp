#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "scube/pipeline.hpp"
#include "scube/stable_decomposition.hpp"

namespace scube {

namespace {

using json = nlohmann::ordered_json;

json ledger_json(const ConstantLedger& c) {
  json j;
  j["E_S"] = c.E_S;
  j["theta"] = c.theta;
  j["eps"] = c.eps;
  j["eps_prime"] = c.eps_prime;
  j["E"] = c.E;
  j["K0"] = c.K0;
  j["K"] = c.K;
  j["r1"] = c.r1;
  j["r2"] = c.r2;
  j["N0"] = c.N0;
  return j;
}

json report_json(const std::string& command, std::uint64_t seed,
                 const ConstantLedger& c, const Report& r) {
  json j;
  j["command"] = command;
  j["seed"] = seed;
  j["constants_ledger"] = ledger_json(c);
  j["checks"] = json::array();
  for (const auto& ch : r.checks) {
    json e;
    e["name"] = ch.name;
    e["pass"] = ch.pass;
    if (!ch.pass && !ch.witness.empty()) e["witness"] = ch.witness;
    j["checks"].push_back(e);
  }
  j["measurements"] = json::object();
  for (const auto& [k, v] : r.measurements) j["measurements"][k] = v;
  return j;
}

const char* rel_name(char r) {
  switch (r) {
    case kRelNested: return "nested";
    case kRelContains: return "contains";
    case kRelOrth: return "orth";
    case kRelTrans: return "trans";
    default: return "self";
  }
}

char rel_code(const std::string& s) {
  if (s == "nested") return kRelNested;
  if (s == "contains") return kRelContains;
  if (s == "orth") return kRelOrth;
  if (s == "trans") return kRelTrans;
  return kRelNone;
}

json instance_json(const GeneratedInstance& g) {
  const HHSInstance& in = g.inst;
  json j;
  j["domains"] = json::array();
  for (int u = 0; u < in.n; ++u) {
    json d;
    d["id"] = u;
    d["relations"] = json::array();
    for (int v = 0; v < in.n; ++v) d["relations"].push_back(rel_name(in.rel[u][v]));
    j["domains"].push_back(d);
  }
  j["trees"] = json::object();
  for (int u = 0; u < in.n; ++u) {
    json t;
    t["vertices"] = in.tree[u].n;
    t["edges"] = json::array();
    for (int x = 0; x < in.tree[u].n; ++x)
      for (int y : in.tree[u].adj[x])
        if (x < y) t["edges"].push_back({x, y});
    j["trees"][std::to_string(u)] = t;
  }
  j["rho_sets"] = json::object();
  j["rho_maps"] = json::object();
  for (int u = 0; u < in.n; ++u)
    for (int v = 0; v < in.n; ++v) {
      if (!in.rho_set[u][v].empty())
        j["rho_sets"][std::to_string(u)][std::to_string(v)] = in.rho_set[u][v];
      if (!in.rho_map[u][v].empty())
        j["rho_maps"][std::to_string(u)][std::to_string(v)] = in.rho_map[u][v];
    }
  j["constants"] = ledger_json(in.c);
  j["endpoints"] = json::object();
  j["endpoints"]["a"] = g.a;
  j["endpoints"]["b"] = g.b;
  return j;
}

GeneratedInstance instance_from_json(const json& j) {
  GeneratedInstance g;
  HHSInstance& in = g.inst;
  int n = (int)j.at("domains").size();
  in.init(n);
  for (const auto& d : j.at("domains")) {
    int u = d.at("id").get<int>();
    for (int v = 0; v < n; ++v)
      in.rel[u][v] = rel_code(d.at("relations")[v].get<std::string>());
  }
  for (int u = 0; u < n; ++u) {
    const json& t = j.at("trees").at(std::to_string(u));
    in.tree[u] = HypGraph(t.at("vertices").get<int>());
    for (const auto& e : t.at("edges"))
      in.tree[u].add_edge(e[0].get<int>(), e[1].get<int>());
  }
  for (auto& [us, body] : j.at("rho_sets").items())
    for (auto& [vs, pts] : body.items())
      in.rho_set[std::stoi(us)][std::stoi(vs)] = pts.get<std::vector<int>>();
  for (auto& [us, body] : j.at("rho_maps").items())
    for (auto& [vs, mp] : body.items())
      in.rho_map[std::stoi(us)][std::stoi(vs)] = mp.get<std::vector<int>>();
  const json& c = j.at("constants");
  in.c.E_S = c.at("E_S").get<int>();
  in.c.theta = c.at("theta").get<int>();
  in.c.eps = c.at("eps").get<int>();
  in.c.eps_prime = c.at("eps_prime").get<int>();
  in.c.E = c.at("E").get<int>();
  in.c.K0 = c.at("K0").get<int>();
  in.c.K = c.at("K").get<int>();
  in.c.r1 = c.at("r1").get<int>();
  in.c.r2 = c.at("r2").get<int>();
  in.c.N0 = c.at("N0").get<int>();
  if (j.contains("endpoints")) {
    g.a = j["endpoints"]["a"].get<Point>();
    g.b = j["endpoints"]["b"].get<Point>();
  }
  return g;
}

json pocset_json(const Pocset& p) {
  json j;
  j["walls"] = json::array();
  for (int w = 0; w < p.n; ++w) j["walls"].push_back({{"id", w}});
  j["order"] = json::array();
  for (int a = 0; a < 2 * p.n; ++a)
    for (int b = 0; b < 2 * p.n; ++b)
      if (a != b && p.less(a, b)) j["order"].push_back({a, b});
  return j;
}

Point parse_point(const std::string& s) {
  Point p;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) p.push_back(std::stoi(tok));
  return p;
}

// long path with hanging leaves: a tree, so delta = 0
HypGraph caterpillar(std::uint64_t seed, int spine, int leaves) {
  HypGraph g(spine + 1 + leaves);
  for (int i = 0; i < spine; ++i) g.add_edge(i, i + 1);
  std::uint64_t s = seed;
  for (int k = 0; k < leaves; ++k) {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    g.add_edge((int)(z % (spine - 1)) + 1, spine + 1 + k);
  }
  return g;
}

struct Args {
  std::uint64_t seed = 1;
  std::uint64_t pseed = 0;
  bool has_pseed = false;
  std::string out, inst, a, b, a2, b2;
  int walls = 8, trials = 20;
  bool want_json = false;
  bool bad = false;
};

Args parse_args(const std::vector<std::string>& args, size_t from) {
  Args a;
  for (size_t i = from; i < args.size(); ++i) {
    auto next = [&](std::string& dst) {
      if (i + 1 >= args.size()) { a.bad = true; return; }
      dst = args[++i];
    };
    std::string v;
    if (args[i] == "--seed") { next(v); if (!a.bad) a.seed = std::stoull(v); }
    else if (args[i] == "--out") next(a.out);
    else if (args[i] == "--inst") next(a.inst);
    else if (args[i] == "--a") next(a.a);
    else if (args[i] == "--b") next(a.b);
    else if (args[i] == "--a2") next(a.a2);
    else if (args[i] == "--perturb") {
      next(v);
      if (!a.bad) { a.pseed = std::stoull(v); a.has_pseed = true; }
    }
    else if (args[i] == "--b2") next(a.b2);
    else if (args[i] == "--walls") { next(v); if (!a.bad) a.walls = std::stoi(v); }
    else if (args[i] == "--trials") { next(v); if (!a.bad) a.trials = std::stoi(v); }
    else if (args[i] == "--json") a.want_json = true;
    else a.bad = true;
  }
  return a;
}

int finish(const json& j, const Args& a, std::string& out_json, int code) {
  out_json = j.dump(2) + "\n";
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) return 2;
    f << out_json;
  }
  return code;
}

}  // namespace

std::string instance_to_json_string(const GeneratedInstance& g) {
  return instance_json(g).dump(2) + "\n";
}

GeneratedInstance instance_from_json_string(const std::string& text) {
  try {
    return instance_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw SpecError("BadInstanceFile", e.what());
  }
}

int run_command(const std::vector<std::string>& args, std::string& out_json) {
  out_json.clear();
  if (args.empty()) {
    out_json = "{\"error\": \"no command\"}\n";
    return 2;
  }
  std::string cmd = args[0];
  size_t from = 1;
  if (cmd == "verify") {
    if (args.size() < 2 || args[1] != "stable-moves") {
      out_json = "{\"error\": \"unknown verify target\"}\n";
      return 2;
    }
    cmd = "verify stable-moves";
    from = 2;
  }
  Args a = parse_args(args, from);
  if (a.bad) {
    out_json = "{\"error\": \"bad arguments\"}\n";
    return 2;
  }
  ConstantLedger defc;

  try {
    if (cmd == "gen") {
      GeneratedInstance g = generate_instance(a.seed);
      return finish(instance_json(g), a, out_json, 0);
    }

    if (cmd == "validate") {
      GeneratedInstance g;
      if (!a.inst.empty()) {
        std::ifstream f(a.inst);
        if (!f) { out_json = "{\"error\": \"cannot read instance\"}\n"; return 2; }
        g = instance_from_json(json::parse(f));
      } else {
        g = generate_instance(a.seed);
      }
      Report r = validate_instance(g.inst);
      return finish(report_json("validate", a.seed, g.inst.c, r), a, out_json,
                    r.ok() ? 0 : 1);
    }

    if (cmd == "dual") {
      Pocset p = random_pocset(a.seed, a.walls);
      Report r = validate_pocset(p);
      CubeComplex cc = dual_complex(p);
      r.measure("n_walls", p.n);
      r.measure("n_vertices", (int)cc.verts.size());
      r.measure("dimension", cc.dimension);
      json j = report_json("dual", a.seed, defc, r);
      j["pocset"] = pocset_json(p);
      return finish(j, a, out_json, r.ok() ? 0 : 1);
    }

    if (cmd == "nr-path") {
      Pocset p = random_pocset(a.seed, a.walls);
      CubeComplex cc = dual_complex(p);
      Vertex va = cc.verts.front(), vb = cc.verts.back();
      HullComplex hc = hull_complex(cc, va, vb);
      NormalPath np = nr_path(hc.cc, hc.a, hc.b);
      Report r;
      r.check("endpoints", np.vertices.front() == hc.a && np.vertices.back() == hc.b, "");
      r.measure("length", np.length());
      r.measure("l1_distance", distance_l1(hc.cc, hc.a, hc.b));
      r.measure("linf_distance", distance_linf(hc.cc, hc.a, hc.b));
      return finish(report_json("nr-path", a.seed, defc, r), a, out_json,
                    r.ok() ? 0 : 1);
    }

    if (cmd == "verify stable-moves") {
      Report r;
      int walls_checked = 0;
      for (int t = 0; t < a.trials; ++t) {
        Pocset p = random_pocset(a.seed * 1000 + t, a.walls);
        CubeComplex cc = dual_complex(p);
        HullComplex hc = hull_complex(cc, cc.verts.front(), cc.verts.back());
        if (hc.cc.p.n < 2) continue;
        for (int h = 0; h < hc.cc.p.n; ++h) {
          StableMovesReport sm = verify_stable_moves(hc.cc, hc.a, hc.b, h);
          ++walls_checked;
          if (!sm.report.ok())
            r.check("stable-moves", false,
                    "trial " + std::to_string(t) + " wall " + std::to_string(h) +
                        ": " + sm.report.first_failure());
        }
      }
      r.check("all-walls-verified", true, "");
      r.measure("trials", a.trials);
      r.measure("walls_checked", walls_checked);
      return finish(report_json("verify stable-moves", a.seed, defc, r), a,
                    out_json, r.ok() ? 0 : 1);
    }

    if (cmd == "stable-interval") {
      int spine = 120 + (int)(a.seed % 7) * 10;
      int eps = (a.seed % 2) ? 1 : 3;
      HypGraph g = caterpillar(a.seed, spine, 5);
      std::vector<int> Y = {spine / 3, 2 * spine / 3};
      EpsilonSetup s = build_setup(g, 0, spine, Y, eps);
      StableInterval T = build_stable_interval(s);
      Report r = T.report;
      r.measure("total_length", T.total_length());
      r.measure("n_items", (int)T.items.size());
      return finish(report_json("stable-interval", a.seed, defc, r), a, out_json,
                    r.ok() ? 0 : 1);
    }

    if (cmd == "decompose") {
      int spine = 150 + (int)(a.seed % 5) * 20;
      int eps = (a.seed % 2) ? 1 : 3;
      HypGraph g = caterpillar(a.seed, spine, 5);
      std::vector<int> Y = {spine / 4, spine / 2};
      std::vector<int> Yp = Y;
      Yp.push_back(3 * spine / 4);
      EpsilonSetup s = build_setup(g, 0, spine, Y, eps);
      EpsilonSetup sp = build_setup(g, 0, spine, Yp, eps);
      BuildResult br = build_stable_pair(s, sp, 2, 3, 2);
      Report r = br.thick.report;
      for (const auto& c : br.plain.report.checks)
        r.check("plain-" + c.name, c.pass, c.witness);
      r.measure("moves", br.moves);
      r.measure("L", br.thick.L);
      return finish(report_json("decompose", a.seed, defc, r), a, out_json,
                    r.ok() ? 0 : 1);
    }

    if (cmd == "hfi") {
      HFI h = random_hfi(a.seed, 5, 4);
      Report r = validate_hfi(h);
      QComplex q = build_q_complex(h);
      r.measure("n_domains", h.n);
      r.measure("n_vertices", (int)q.verts.size());
      r.measure("n_walls", q.n_walls);
      return finish(report_json("hfi", a.seed, defc, r), a, out_json,
                    r.ok() ? 0 : 1);
    }

    if (cmd == "trim") {
      HFI h = random_hfi(a.seed, 5, 4);
      TrimmingSetup set;
      for (int u = 0; u < h.n; ++u)
        if (h.len[u] >= 2) set.segs.push_back({u, 0, 1});
      set.B = (int)set.segs.size() + 2;
      TrimResult tr = trim_hfi(h, set);
      Report r = tr.report;
      r.measure("deleted_hyperplanes", tr.deleted_hyperplanes);
      r.measure("n_live", (int)tr.live.size());
      r.measure("n_dropped", (int)tr.dropped.size());
      return finish(report_json("trim", a.seed, defc, r), a, out_json,
                    r.ok() ? 0 : 1);
    }

    if (cmd == "bicomb") {
      GeneratedInstance g;
      if (!a.inst.empty()) {
        std::ifstream f(a.inst);
        if (!f) { out_json = "{\"error\": \"cannot read instance\"}\n"; return 2; }
        g = instance_from_json(json::parse(f));
      } else {
        g = generate_instance(a.seed);
      }
      auto point_arg = [&](const std::string& text, const Point& fallback) {
        if (text.empty()) return fallback;
        Point p = parse_point(text);
        if ((int)p.size() != g.inst.n)
          throw SpecError("BadPoint", "expected " + std::to_string(g.inst.n) +
                                          " coordinates, got " +
                                          std::to_string(p.size()));
        return p;
      };
      Point pa = point_arg(a.a, g.a);
      Point pb = point_arg(a.b, g.b);
      Point pa2, pb2;
      if (!a.a2.empty() || !a.b2.empty()) {
        pa2 = point_arg(a.a2, pa);
        pb2 = point_arg(a.b2, pb);
      } else {
        GeneratedInstance tmp = g;
        tmp.a = pa;
        tmp.b = pb;
        perturb_pair(tmp, a.has_pseed ? a.pseed : a.seed, pa2, pb2);
      }
      FellowTravelReport ft = fellow_traveling(g.inst, pa, pb, pa2, pb2);
      Report r = ft.report;
      for (const auto& c : ft.diagram.report.checks)
        r.check("diagram-" + c.name, c.pass, c.witness);
      r.measure("Sigma", ft.diagram.Sigma);
      r.measure("S0", ft.diagram.S0);
      return finish(report_json("bicomb", a.seed, g.inst.c, r), a, out_json,
                    r.ok() ? 0 : 1);
    }

    if (cmd == "audit") {
      GeneratedInstance g = generate_instance(a.seed);
      CubicalModel md = build_cubical_model(g.inst, g.a, g.b);
      Report r = audit_maps(md.cs);
      Report rm = audit_metrics(md.cs);
      for (const auto& c : rm.checks) r.check(c.name, c.pass, c.witness);
      for (const auto& [k, v] : rm.measurements) r.measure(k, v);
      r.measure("B0", md.B0);
      return finish(report_json("audit", a.seed, g.inst.c, r), a, out_json,
                    r.ok() ? 0 : 1);
    }
  } catch (const SpecError& e) {
    Report r;
    r.check("no-error", false, e.what());
    return finish(report_json(cmd, a.seed, defc, r), a, out_json, 1);
  }

  out_json = "{\"error\": \"unknown command\"}\n";
  return 2;
}

}  // namespace scube
