//! Independent reference implementations used by several test targets.
#![allow(dead_code)]

use rand::Rng;

use lsminit::seed;

/// Victor-Purpura distance by brute force: the cheapest over every partial
/// one-to-one matching (crossings allowed) of `a` onto `b`. Matched pairs
/// cost `q |dt|`, unmatched spikes cost 1 each.
pub fn vp_brute(a: &[f64], b: &[f64], q: f64) -> f64 {
    fn go(i: usize, a: &[f64], b: &[f64], used: &mut Vec<bool>, q: f64, shift: f64, matched: usize) -> f64 {
        if i == a.len() {
            return shift + (a.len() - matched + b.len() - matched) as f64;
        }
        // Leave a[i] unmatched.
        let mut best = go(i + 1, a, b, used, q, shift, matched);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                let c = go(i + 1, a, b, used, q, shift + q * (a[i] - b[j]).abs(), matched + 1);
                used[j] = false;
                best = best.min(c);
            }
        }
        best
    }
    go(0, a, b, &mut vec![false; b.len()], q, 0.0, 0)
}

/// van Rossum distance by composite Simpson quadrature of
/// `(1/tau) * integral (f_a - f_b)^2` with `f = sum_i exp(-(t - t_i)/tau) H(t - t_i)`.
///
/// Spike times are integer indices on a grid of step `h`, so every kernel
/// jump falls on a node and each panel integrates a smooth function. The
/// window runs from the first spike to `10 tau` past the last.
pub fn vr_quadrature(a: &[u64], b: &[u64], h: f64, tau: f64) -> f64 {
    let Some(&first) = a.iter().chain(b).min() else {
        return 0.0;
    };
    let last = *a.iter().chain(b).max().unwrap();
    let end = last + (10.0 * tau / h).ceil() as u64;
    let jumps = |k: u64| {
        a.iter().filter(|&&t| t == k).count() as f64 - b.iter().filter(|&&t| t == k).count() as f64
    };
    let half = (-h / (2.0 * tau)).exp();
    let full = (-h / tau).exp();
    let mut g = 0.0;
    let mut integral = 0.0;
    for k in first..end {
        g += jumps(k);
        let left = g * g;
        let mid = (g * half).powi(2);
        let right = (g * full).powi(2);
        integral += h / 6.0 * (left + 4.0 * mid + right);
        g *= full;
    }
    (integral / tau).sqrt()
}

/// Random sorted train of at most `max` spikes on the integer grid `0..span`.
pub fn grid_train(rng: &mut seed::Rng, max: usize, span: u64) -> Vec<u64> {
    let n = rng.random_range(0..=max);
    let mut t: Vec<u64> = (0..n).map(|_| rng.random_range(0..span)).collect();
    t.sort_unstable();
    t
}

/// All subsets of `grid` with at most `max` elements, each sorted.
pub fn subsets(grid: &[f64], max: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << grid.len()) {
        if mask.count_ones() as usize <= max {
            out.push(
                grid.iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &t)| t)
                    .collect(),
            );
        }
    }
    out
}

/// Raw all-to-all STDP sum written out from the window definition.
pub fn stdp_double_sum(pre: &[f64], post: &[f64], a_plus: f64, a_minus: f64, tau_plus: f64, tau_minus: f64) -> f64 {
    let mut total = 0.0;
    for &tn in post {
        for &tf in pre {
            let x = tn - tf;
            if x > 0.0 {
                total += a_plus * (-x / tau_plus).exp();
            } else if x < 0.0 {
                total -= a_minus * (x / tau_minus).exp();
            }
        }
    }
    total
}

/// A random but valid configuration document. Keys appear in shuffled
/// order within their sections and some are left out.
pub fn random_config_doc(rng: &mut seed::Rng) -> String {
    let mut sections: Vec<(&str, Vec<String>)> = Vec::new();
    let pick = |rng: &mut seed::Rng| rng.random_bool(0.7);
    let dec = |rng: &mut seed::Rng, lo: f64, hi: f64| {
        let v: f64 = rng.random_range(lo..hi);
        // Mix short literals with full-precision ones.
        if rng.random_bool(0.5) {
            format!("{:.3}", v)
        } else {
            format!("{v}")
        }
    };

    let mut sim = Vec::new();
    if pick(rng) {
        sim.push(format!("dt_ms = {}", ["0.1", "0.05", "0.2", "0.5"][rng.random_range(0..4)]));
    }
    if pick(rng) {
        sim.push(format!("duration_ms = {}", rng.random_range(1..5000)));
    }
    if pick(rng) {
        sim.push(format!("stimulus = {}", if rng.random_bool(0.5) { "regular" } else { "poisson" }));
    }
    if pick(rng) {
        sim.push(format!("rate_hz = {}", dec(rng, 0.5, 200.0)));
    }
    if pick(rng) {
        sim.push(format!("amplitude_pa = {}", dec(rng, 0.0, 1e5)));
    }
    if pick(rng) {
        sim.push(format!("stimulus_seed = {}", rng.random::<u32>()));
    }
    if pick(rng) {
        sim.push(format!("kappa_mv = {}", dec(rng, 0.001, 2.0)));
    }
    if pick(rng) {
        sim.push(format!("tau_m_ms = {}", dec(rng, 1.0, 50.0)));
    }
    if pick(rng) {
        sim.push(format!("c_m_pf = {}", dec(rng, 10.0, 500.0)));
    }
    if pick(rng) {
        sim.push(format!("t_ref_ms = {}", dec(rng, 0.0, 5.0)));
    }
    if pick(rng) {
        let rest: f64 = rng.random_range(-80.0..-60.0);
        sim.push(format!("u_rest_mv = {rest}"));
        sim.push(format!("u_reset_mv = {}", rest - rng.random_range(0.0..5.0)));
        sim.push(format!("u_th_mv = {}", rest + rng.random_range(1.0..30.0)));
    }
    sections.push(("simulation", sim));

    let mut topo = Vec::new();
    if rng.random_bool(0.5) {
        topo.push("kind = layered".to_string());
        let n = rng.random_range(2..5);
        let sizes: Vec<String> = (0..n).map(|_| rng.random_range(1..200).to_string()).collect();
        topo.push(format!("layers = {}", sizes.join(",")));
    } else {
        if pick(rng) {
            topo.push("kind = lsm".to_string());
        }
        let io = rng.random_range(1..6);
        if pick(rng) {
            topo.push(format!("n_in = {io}"));
            topo.push(format!("n_out = {io}"));
        }
        if pick(rng) {
            topo.push(format!("n_liquid = {}", rng.random_range(8..40)));
            topo.push(format!("k_rec = {}", rng.random_range(1..8)));
        }
        if pick(rng) {
            let v = if rng.random_bool(0.3) { "auto".into() } else { rng.random_range(1..8).to_string() };
            topo.push(format!("n_inh = {v}"));
        }
        if pick(rng) {
            let v = if rng.random_bool(0.3) { "auto".into() } else { dec(rng, 0.0, 2000.0) };
            topo.push(format!("w_direct = {v}"));
        }
    }
    sections.push(("topology", topo));

    let mut init = Vec::new();
    if pick(rng) {
        let mut all = vec!["uniform", "barabasi_albert", "erdos_renyi"];
        let keep = rng.random_range(1..=3);
        while all.len() > keep {
            all.remove(rng.random_range(0..all.len()));
        }
        init.push(format!("method = {}", all.join(", ")));
    }
    let m = rng.random_range(1..5);
    if pick(rng) {
        init.push(format!("ba_m = {m}"));
    }
    if pick(rng) {
        let v = if rng.random_bool(0.3) { "auto".into() } else { rng.random_range(m + 1..300).to_string() };
        init.push(format!("graph_n = {v}"));
    }
    if pick(rng) {
        let v = if rng.random_bool(0.3) { "auto".into() } else { dec(rng, 0.0, 1.0) };
        init.push(format!("er_p = {v}"));
    }
    sections.push(("init", init));

    let mut sweep = Vec::new();
    let mut ceiling_floor = 0.0f64;
    if pick(rng) {
        let n = rng.random_range(1..6);
        let mut lo = rng.random_range(0..5) as f64;
        let mut parts = Vec::new();
        for _ in 0..n {
            let hi = lo + rng.random_range(1..50) as f64;
            if rng.random_bool(0.2) {
                parts.push(format!("{hi}"));
            } else {
                parts.push(format!("{lo}:{hi}"));
            }
            ceiling_floor = ceiling_floor.max(hi);
            lo = hi;
        }
        sweep.push(format!("ranges = {}", parts.join(",")));
    }
    if pick(rng) {
        sweep.push(format!("epochs = {}", rng.random_range(1..100)));
    }
    if pick(rng) {
        let s = if rng.random_bool(0.5) {
            let a = rng.random_range(0..100u64);
            format!("{}..{}", a, a + rng.random_range(1..30))
        } else {
            let mut v: Vec<u64> = (0..rng.random_range(1..6)).map(|_| rng.random_range(0..1000)).collect();
            v.sort_unstable();
            v.dedup();
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        };
        sweep.push(format!("seeds = {s}"));
    }
    sections.push(("sweep", sweep));

    let mut metrics = Vec::new();
    if pick(rng) {
        metrics.push(format!("vp_q_per_ms = {}", dec(rng, 0.0, 20.0)));
    }
    if pick(rng) {
        metrics.push(format!("vr_tau_ms = {}", dec(rng, 0.5, 100.0)));
    }
    sections.push(("metrics", metrics));

    let mut stdp = Vec::new();
    if pick(rng) {
        stdp.push(format!("enabled = {}", rng.random_bool(0.5)));
    }
    for key in ["a_plus", "a_minus"] {
        if pick(rng) {
            stdp.push(format!("{key} = {}", dec(rng, 0.0, 1.0)));
        }
    }
    for key in ["tau_plus_ms", "tau_minus_ms"] {
        if pick(rng) {
            stdp.push(format!("{key} = {}", dec(rng, 1.0, 40.0)));
        }
    }
    if pick(rng) {
        stdp.push("w_floor = 0".to_string());
    }
    if pick(rng) {
        let v = if rng.random_bool(0.5) {
            "auto".into()
        } else {
            format!("{}", ceiling_floor.max(100.0) + rng.random_range(1.0..500.0))
        };
        stdp.push(format!("w_ceiling = {v}"));
    }
    sections.push(("stdp", stdp));

    let mut doc = String::new();
    let n_sections = sections.len();
    for _ in 0..n_sections {
        let (name, mut lines) = sections.remove(rng.random_range(0..sections.len()));
        if lines.is_empty() && rng.random_bool(0.5) {
            continue;
        }
        // Shuffle by repeated removal; keep u_* triples valid regardless of order.
        let mut shuffled = Vec::new();
        while !lines.is_empty() {
            shuffled.push(lines.remove(rng.random_range(0..lines.len())));
        }
        if rng.random_bool(0.3) {
            doc.push_str("# generated\n");
        }
        doc.push_str(&format!("[{name}]\n"));
        for l in shuffled {
            doc.push_str(&l);
            doc.push('\n');
            if rng.random_bool(0.1) {
                doc.push('\n');
            }
        }
    }
    doc
}
