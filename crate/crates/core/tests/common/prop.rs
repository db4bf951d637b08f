use analysis_kit::prop::{eval_ground, nsat, sat, Formula};
use analysis_kit::term::Substitution;

/// All ground formulas of depth at most `d`, a constant having depth 1.
pub fn ground_formulas(d: usize) -> Vec<Formula> {
    if d == 1 {
        return vec![Formula::constant(true), Formula::constant(false)];
    }
    let smaller = ground_formulas(d - 1);
    let mut out = vec![Formula::constant(true), Formula::constant(false)];
    out.extend(smaller.iter().cloned().map(Formula::negate));
    for f in &smaller {
        for g in &smaller {
            out.push(Formula::and(f.clone(), g.clone()));
            out.push(Formula::or(f.clone(), g.clone()));
        }
    }
    out
}

/// Truth table written directly over the formula shape.
pub fn truth(f: &Formula) -> bool {
    match f {
        Formula::Const(t) => t.is_atom("true"),
        Formula::And(a, b) => truth(a) && truth(b),
        Formula::Or(a, b) => truth(a) || truth(b),
        Formula::Not(a) => !truth(a),
    }
}

/// sat is non-empty exactly for true ground formulas, nsat exactly for false
/// ones. Returns the number of formulas checked.
pub fn check_ground(depth: usize) -> Result<usize, String> {
    let all = ground_formulas(depth);
    for f in &all {
        let t = truth(f);
        if eval_ground(f) != Ok(t) {
            return Err(format!("eval_ground({f})"));
        }
        if sat(f, Substitution::new()).next().is_some() != t {
            return Err(format!("sat({f})"));
        }
        if nsat(f, Substitution::new()).next().is_some() == t {
            return Err(format!("nsat({f})"));
        }
    }
    Ok(all.len())
}
