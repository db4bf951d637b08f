use std::collections::BTreeSet;
use std::rc::Rc;

use analysis_kit::process::Process;

/// Successors read straight off the three rules.
pub fn succ(p: &Process) -> Vec<(String, Process)> {
    match p {
        Process::Stop => vec![],
        Process::Prefix(a, q) => vec![(a.to_string(), (**q).clone())],
        Process::Interleave(l, r) => {
            let mut out: Vec<_> = succ(l)
                .into_iter()
                .map(|(a, l2)| (a, Process::Interleave(Rc::new(l2), r.clone())))
                .collect();
            out.extend(
                succ(r)
                    .into_iter()
                    .map(|(a, r2)| (a, Process::Interleave(l.clone(), Rc::new(r2)))),
            );
            out
        }
    }
}

/// Reachable set by repeated expansion until nothing new appears.
pub fn brute_reach(p: &Process) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut states: Vec<Process> = vec![p.clone()];
    loop {
        let before = states.len();
        for s in states.clone() {
            for (_, n) in succ(&s) {
                if !states.contains(&n) {
                    states.push(n);
                }
            }
        }
        if states.len() == before {
            break;
        }
    }
    let key = |s: &Process| s.to_term_string();
    let dead = states
        .iter()
        .filter(|s| succ(s).is_empty())
        .map(key)
        .collect();
    (states.iter().map(key).collect(), dead)
}

pub fn brute_traces(p: &Process, n: usize) -> Vec<Vec<String>> {
    if n == 0 {
        return vec![vec![]];
    }
    succ(p)
        .into_iter()
        .flat_map(|(a, q)| {
            brute_traces(&q, n - 1).into_iter().map(move |mut t| {
                t.insert(0, a.clone());
                t
            })
        })
        .collect()
}
