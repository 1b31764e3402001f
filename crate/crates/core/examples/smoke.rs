use qcx_core::catalog::{build, DomainSpec};
use qcx_core::spectral::*;
use std::collections::HashSet;

fn main() {
    let spec = DomainSpec::parse("pm:3,2").unwrap();
    let d = build(&spec).unwrap();
    // all tabloids of shape (4,2) on 6 vertices
    let mut count_ok = 0;
    let mut count_bad = 0;
    let mut ok_rows = Vec::new();
    for row2 in combos(6, 2) {
        let row1: Vec<u32> = (1..=6u32).filter(|v| !row2.contains(v)).collect();
        let a = Tabloid::new(vec![row1.clone(), row2.clone()]);
        let vals = debug_raw_values(&CharKind::PmSingle { a: a.clone() }, &d, &spec);
        let set: HashSet<i64> = vals.iter().copied().map(|v| v.abs()).filter(|&v| v != 0).collect();
        if set.len() <= 1 {
            count_ok += 1;
            ok_rows.push(vals);
        } else {
            count_bad += 1;
            println!("shape (4,2) rows {:?} | {:?}: values {:?}", row1, row2, vals);
        }
    }
    println!("ok {count_ok} bad {count_bad}");
}

fn combos(n: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(n: u32, k: usize, start: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k { out.push(cur.clone()); return; }
        for v in start..=n {
            cur.push(v);
            rec(n, k, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 1, &mut Vec::new(), &mut out);
    out
}
