//! Cross-checks of the block-support decision procedures against brute
//! force over all standard partial isometries of small algebras.

use nestlab_core::embedding::Embedding;
use nestlab_core::pisom::enumerate_all_pisoms;
use nestlab_core::NestAlgebra;

fn monotone_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, m: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in lo..=m {
            cur.push(a);
            rec(n, m, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, 1, &mut Vec::new(), &mut out);
    out
}

fn embeddings_between(dom: &NestAlgebra, cod: &NestAlgebra, max_mu: usize) -> Vec<Embedding> {
    let maps = monotone_maps(dom.num_atoms(), cod.num_atoms());
    let mut out = Vec::new();
    for f in &maps {
        if let Ok(phi) = Embedding::from_atom_lists(dom.clone(), cod.clone(), &[f.as_slice()]) {
            out.push(phi);
        }
    }
    if max_mu >= 2 {
        for (i, f) in maps.iter().enumerate() {
            for g in &maps[i..] {
                if let Ok(phi) = Embedding::from_atom_lists(
                    dom.clone(),
                    cod.clone(),
                    &[f.as_slice(), g.as_slice()],
                ) {
                    out.push(phi);
                }
            }
        }
    }
    out
}

/// Definition-level flags: quantify over every standard pisom of the
/// domain instead of over feasible block supports.
fn brute_force_flags(phi: &Embedding) -> (bool, bool, bool, bool) {
    let mut loc = true;
    let mut lop = true;
    let mut oc = true;
    let mut op = true;
    for v in enumerate_all_pisoms(phi.domain()) {
        let image = phi.apply(&v).expect("in domain");
        if v.rank() == 1 {
            loc &= image.is_oc();
            lop &= image.is_op();
        }
        if v.is_oc() {
            oc &= image.is_oc();
        }
        if v.is_op() {
            op &= image.is_op();
        }
    }
    (loc, lop, oc, op)
}

#[test]
fn flags_match_brute_force() {
    let cases: &[(&[u32], &[u32])] = &[
        (&[1, 1], &[1, 1, 1]),
        (&[1, 1], &[2, 2]),
        (&[1, 1], &[1, 2, 1]),
        (&[2, 1], &[2, 2, 1]),
        (&[1, 1, 1], &[1, 1, 1, 1]),
        (&[2, 2], &[2, 2, 2]),
        (&[1, 2], &[2, 2, 1]),
    ];
    for &(dr, cr) in cases {
        let dom = NestAlgebra::new(dr).unwrap();
        let cod = NestAlgebra::new(cr).unwrap();
        for phi in embeddings_between(&dom, &cod, 2) {
            let flags = phi.classify_order_properties();
            let (loc, lop, oc, op) = brute_force_flags(&phi);
            assert_eq!(flags.loc, loc, "loc {:?}", phi.summands());
            assert_eq!(flags.lop, lop, "lop {:?}", phi.summands());
            assert_eq!(flags.oc, oc, "oc {:?}", phi.summands());
            assert_eq!(flags.op, op, "op {:?}", phi.summands());
        }
    }
}

#[test]
fn op_implies_oc_across_embeddings() {
    let dom = NestAlgebra::new(&[1, 1, 1]).unwrap();
    let cod = NestAlgebra::new(&[2, 1, 2]).unwrap();
    for phi in embeddings_between(&dom, &cod, 2) {
        let f = phi.classify_order_properties();
        assert!(!f.op || f.oc);
        assert!(!f.op || f.lop);
        assert!(!f.oc || f.loc);
        assert!(!f.lop || f.loc);
    }
}

#[test]
fn peel_uniqueness_oracle() {
    // for every LOC embedding in a small range, the set of summand
    // multisets realizing its K0 contains exactly one LOC member, and the
    // greedy peel finds it
    use nestlab_core::conjugacy::recover_summands_from_k0;

    let dom = NestAlgebra::new(&[1, 1]).unwrap();
    let cod = NestAlgebra::new(&[2, 1, 1]).unwrap();
    let all = embeddings_between(&dom, &cod, 2);
    for phi in all.iter().filter(|p| p.classify_order_properties().loc) {
        let k = phi.k0_matrix();
        let loc_realizers: Vec<_> = all
            .iter()
            .filter(|q| q.k0_matrix() == k && q.classify_order_properties().loc)
            .collect();
        assert_eq!(loc_realizers.len(), 1, "K0 {:?}", k.entries());
        let rec = recover_summands_from_k0(&dom, &cod, &k).unwrap();
        assert_eq!(rec.as_slice(), phi.summands());
    }
}
