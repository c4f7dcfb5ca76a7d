//! Verification suites behind `alcoves verify`.

use std::sync::Arc;

use alcoves::alcovegeom::affine_simple_name;
use alcoves::basechange::{box_compose_check, check_box_characterization};
use alcoves::basering::{hom_exists, BaseRing};
use alcoves::ordertopo::{check_sharp_flat, check_tops, check_translation_order, AlcoveSet, Window};
use alcoves::presheaf::{
    check_decomposition, check_support_condition, delta_inclusion, extend_morphism, is_sheaf, validate, Presheaf,
};
use alcoves::report::Report;
use alcoves::rootsys::{build_root_system, gkm_check, CartanType};
use alcoves::structalg::{all_labels, check_split, component_decomposition, random_z, z_sections};
use alcoves::wallcross::{
    check_characterization, check_decgen, check_eta, check_s_preservation, check_wallcross_base_change,
    s_invariant_extension, sample_flat_invariant_sections, WallCrossing,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;

pub const SUITES: [&str; 6] = ["roots", "order", "structure", "presheaf", "basechange", "wallcross"];

fn num_simple(ring: &BaseRing) -> usize {
    ring.rank() + 1
}

/// The base ring and its distinct specializations.
fn ring_family(ring: &BaseRing) -> Vec<BaseRing> {
    let mut out = vec![ring.clone()];
    for t in ring.specializations() {
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

pub fn roots_suite(cfg: &RunConfig) -> Report {
    let mut r = Report::new();
    for ty in CartanType::ALL {
        let rs = build_root_system(ty);
        for p in [2, 3, 5, 7] {
            let rep = gkm_check(&rs, p);
            let expect = p != 2 && !(ty == CartanType::G2 && p == 3);
            r.check(
                format!("GKM verdict for {ty} over F_{p}"),
                rep.holds() == expect,
                if rep.holds() { "accepted".to_string() } else { format!("rejected: {}", rep.describe(&rs)) },
            );
        }
    }
    let rs = build_root_system(cfg.ty);
    let (roots, order) = match cfg.ty {
        CartanType::A1 => (1, 2),
        CartanType::A2 => (3, 6),
        CartanType::B2 => (4, 8),
        CartanType::G2 => (6, 12),
        CartanType::A3 => (6, 24),
    };
    r.check(
        format!("{} has {roots} positive roots and Weyl group of order {order}", cfg.ty),
        rs.num_pos_roots() == roots && rs.weyl.order() == order,
        format!("found {} and {}", rs.num_pos_roots(), rs.weyl.order()),
    );
    r
}

pub fn order_suite(cfg: &RunConfig, ring: &BaseRing, rng: &mut ChaCha8Rng) -> alcoves::Result<Report> {
    let mut r = Report::new();
    for t in ring_family(ring) {
        let w = Window::radius(&t, cfg.window, cfg.padding);
        let mut sub = Report::new();
        sub.check(format!("order on {} alcoves is a partial order", w.len()), w.is_partial_order(), "");
        sub.check(format!("order certified stable at padding {}", cfg.padding), w.stable, "");
        sub.append(check_translation_order(&w));
        let comps = w.check_components();
        sub.check(
            "components are the orbits of the affine reflection subgroup",
            comps.is_ok(),
            comps.err().map(|e| e.to_string()).unwrap_or_default(),
        );
        r.append(sub.scoped(&t.to_string()));
    }
    let rs = ring.rs.clone();
    let s_ring = BaseRing::structure(rs.clone(), ring.p)?;
    let g_ring = BaseRing::generic(rs.clone(), ring.p)?;
    for s in 0..num_simple(ring) {
        let name = affine_simple_name(&rs, s);
        let w = Window::s_closed(&s_ring, cfg.window, cfg.padding, s);
        r.append(check_tops(&w, s)?.scoped(&format!("{s_ring} {name}")));
        let wg = Window::s_closed(&g_ring, cfg.window, cfg.padding, s);
        r.append(check_tops(&wg, s)?.scoped(&format!("{g_ring} {name}")));
        let opens = w.canonical_opens(&[s]);
        let pairs: Vec<(usize, usize)> =
            (0..50).map(|_| (rng.gen_range(0..opens.len()), rng.gen_range(0..opens.len()))).collect();
        r.append(check_sharp_flat(&w, s, &opens, &pairs)?.scoped(&format!("{s_ring} {name}")));
    }
    Ok(r)
}

pub fn structure_suite(cfg: &RunConfig, ring: &BaseRing, rng: &mut ChaCha8Rng) -> alcoves::Result<Report> {
    let mut r = Report::new();
    let top = cfg.max_deg;
    let basis = z_sections(ring, &all_labels(ring), top);
    r.check(format!("structure algebra dims in degrees 0..={top}"), true, format!("{:?}", basis.dims()));
    for t in ring_family(ring) {
        let dec = component_decomposition(&t, top)?;
        r.check(
            format!("{t}: structure algebra is the sum over {} components", dec.components.len()),
            dec.holds(),
            format!("{:?} vs {:?}", dec.total_dims, dec.summed_dims),
        );
    }
    for s in 0..num_simple(ring) {
        let samples: Vec<_> = (0..20).map(|_| random_z(ring, &basis, top, rng).0).collect();
        r.append(check_split(ring, s, &samples));
    }
    Ok(r)
}

fn leaves(w: &Arc<Window>) -> alcoves::Result<Vec<Presheaf>> {
    let mut out = Vec::new();
    for x in w.all_labels() {
        out.push(Presheaf::skyscraper(w, x)?);
    }
    out.push(Presheaf::structure(w));
    Ok(out)
}

pub fn presheaf_suite(cfg: &RunConfig, ring: &BaseRing) -> alcoves::Result<Report> {
    let mut r = Report::new();
    let d = cfg.max_deg;
    let w = Arc::new(Window::s_closed(ring, cfg.window, cfg.padding, 0));
    let opens = w.canonical_opens(&[0]);
    for p in leaves(&w)? {
        let mut sub = validate(&p, &opens, d);
        sub.append(is_sheaf(&p, &opens, d).to_report(&w, "sheaf"));
        sub.append(check_decomposition(&p, &opens, d));
        r.append(sub.scoped(&p.describe()));
    }
    // pre-plus wall crossing of a skyscraper over S
    let s_ring = BaseRing::structure(ring.rs.clone(), ring.p)?;
    let mut found = None;
    let mut plus_ok = true;
    for s in 0..num_simple(ring) {
        let ws = Arc::new(Window::s_closed(&s_ring, cfg.window, cfg.padding, s));
        let sopens = ws.canonical_opens(&[s]);
        for x in ws.all_labels() {
            let e = Presheaf::skyscraper(&ws, x)?.epsilon(s)?;
            let rep = check_support_condition(&e, &sopens, d);
            if !rep.passed() && found.is_none() {
                found = Some(format!("{} on {}", e.describe(), affine_simple_name(&ws.rs, s)));
            }
            plus_ok &= check_support_condition(&e.plus(), &sopens, d).passed();
        }
    }
    r.check(
        "pre-plus wall crossing violates the support condition on some instance",
        found.is_some(),
        found.unwrap_or_default(),
    );
    r.check("its plus image satisfies the support condition", plus_ok, "");
    // rigidity along the s-invariant opens
    let x = w.label(0);
    let sky = Presheaf::skyscraper(&w, x)?.shift(-2 * ring.num_roots() as i32)?;
    let st = Presheaf::structure(&w);
    let family: Vec<AlcoveSet> = opens.iter().filter(|j| w.is_s_invariant(j, 0).unwrap_or(false)).cloned().collect();
    let direct = delta_inclusion(&sky, &st, x, &opens, d)?;
    let data = delta_inclusion(&sky, &st, x, &family, d)?;
    let ext = extend_morphism(&data, &opens);
    r.check(
        format!("morphism given on {} s-invariant opens extends uniquely", family.len()),
        ext.as_ref().is_ok_and(|e| e.same_matrices(&direct)),
        ext.err().map(|e| e.to_string()).unwrap_or_default(),
    );
    Ok(r)
}

pub fn basechange_suite(cfg: &RunConfig, ring: &BaseRing) -> alcoves::Result<Report> {
    let mut r = Report::new();
    let d = cfg.max_deg;
    let w = Arc::new(Window::radius(ring, cfg.window, cfg.padding));
    let st = Presheaf::structure(&w);
    let fam = ring_family(ring);
    for t in &fam {
        let b = st.box_change(t)?;
        r.append(check_box_characterization(&st, &b, d).scoped(&format!("structure box {t}")));
    }
    for t1 in &fam {
        for t2 in &fam {
            if hom_exists(t1, t2) && t1 != ring && t1 != t2 {
                r.append(box_compose_check(&st, t1, t2, d)?);
            }
        }
    }
    Ok(r)
}

pub fn wallcross_suite(cfg: &RunConfig, ring: &BaseRing, rng: &mut ChaCha8Rng) -> alcoves::Result<Report> {
    let mut r = Report::new();
    let d = cfg.max_deg;
    for s in 0..num_simple(ring) {
        let name = affine_simple_name(&ring.rs, s);
        let w = Arc::new(Window::s_closed(ring, cfg.window, cfg.padding, s));
        let opens = w.canonical_opens(&[s]);
        for p in leaves(&w)? {
            let wc = WallCrossing::new(&p, s)?;
            let mut sub = check_characterization(&wc, &opens, d)?;
            sub.append(check_eta(&wc, &opens, d)?);
            if ring.is_generic() {
                sub.append(check_decgen(&p, s, &opens, d)?);
            }
            for t in ring.specializations() {
                if t != *ring {
                    sub.append(check_wallcross_base_change(&p, s, &t, d)?);
                }
            }
            r.append(sub.scoped(&format!("{} {name}", p.describe())));
        }
        let st = Presheaf::structure(&w);
        let pres = check_s_preservation(&st, s, d);
        match pres {
            Ok(rep) => r.append(rep.scoped(&format!("structure {name}"))),
            Err(e) => {
                r.check(format!("structure {name}: wall crossing preserves the category"), false, e.to_string());
            }
        }
        let member = alcoves::basechange::s_membership(&st, d)?;
        let wc = WallCrossing::new(&st, s)?;
        let targets: Vec<&AlcoveSet> = opens.iter().filter(|j| !wc.is_invariant(j)).collect();
        let mut bad = Vec::new();
        let mut count = 0;
        for j in targets.iter().take(3) {
            for m in sample_flat_invariant_sections(&wc, j, 2, 2, rng)? {
                count += 1;
                if let Err(e) = s_invariant_extension(&wc, &member, j, &m, 2) {
                    bad.push(e.to_string());
                }
            }
        }
        r.check(
            format!("structure {name}: unique s-invariant extensions for {count} sampled sections"),
            bad.is_empty(),
            bad.first().cloned().unwrap_or_default(),
        );
    }
    Ok(r)
}

/// Runs the named suite, or every suite for `all`.
pub fn run_suite(cfg: &RunConfig, ring: &BaseRing, name: &str) -> alcoves::Result<Report> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let names: Vec<&str> = if name == "all" { SUITES.to_vec() } else { vec![name] };
    let mut r = Report::new();
    for n in names {
        let sub = match n {
            "roots" => roots_suite(cfg),
            "order" => order_suite(cfg, ring, &mut rng)?,
            "structure" => structure_suite(cfg, ring, &mut rng)?,
            "presheaf" => presheaf_suite(cfg, ring)?,
            "basechange" => basechange_suite(cfg, ring)?,
            "wallcross" => wallcross_suite(cfg, ring, &mut rng)?,
            other => return Err(alcoves::Error::Precondition(format!("unknown suite {other}"))),
        };
        r.append(sub.scoped(n));
    }
    Ok(r)
}
