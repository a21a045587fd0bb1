use crate::error::{Error, Result};
use crate::model::{Preorder, State};

/// Membership bitset: bit `i` set iff state `i` of the enumerated list belongs.
pub type StateMask = u64;

/// An upper set of an enumerated state list: `x` in the set and `x <= y`
/// imply `y` in the set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UpperSet {
    pub members: StateMask,
}

impl UpperSet {
    pub fn contains(&self, id: usize) -> bool {
        self.members >> id & 1 == 1
    }

    pub fn ids(&self) -> Vec<usize> {
        (0..StateMask::BITS as usize)
            .filter(|&i| self.contains(i))
            .collect()
    }

    /// Full pairwise check of upward closure.
    pub fn is_closed(&self, states: &[State], preorder: Preorder) -> bool {
        (0..states.len()).all(|i| {
            !self.contains(i)
                || (0..states.len())
                    .all(|j| !preorder.holds(&states[i], &states[j]) || self.contains(j))
        })
    }
}

/// Up- and down-closures of each state as bitsets.
pub(crate) fn closures(states: &[State], preorder: Preorder) -> (Vec<StateMask>, Vec<StateMask>) {
    let n = states.len();
    let mut up = vec![0; n];
    let mut down = vec![0; n];
    for i in 0..n {
        for j in 0..n {
            if preorder.holds(&states[i], &states[j]) {
                up[i] |= 1 << j;
                down[j] |= 1 << i;
            }
        }
    }
    (up, down)
}

/// Every upper set of `(states, preorder)`, the empty set and the whole
/// space included.
///
/// States are decided in list order. Putting an undecided state in forces
/// its up-closure in; leaving it out forces its down-closure out. The two
/// forced regions can never collide, so every leaf is a distinct upper set.
pub fn enumerate_upper_sets(
    states: &[State],
    preorder: Preorder,
    cap: usize,
) -> Result<Vec<UpperSet>> {
    let cap = cap.min(StateMask::BITS as usize);
    if states.len() > cap {
        return Err(Error::capacity("upper-set enumeration", states.len() as u128, cap));
    }
    let (up, down) = closures(states, preorder);

    fn rec(
        i: usize,
        inside: StateMask,
        outside: StateMask,
        up: &[StateMask],
        down: &[StateMask],
        out: &mut Vec<UpperSet>,
    ) {
        if i == up.len() {
            out.push(UpperSet { members: inside });
            return;
        }
        let bit = 1 << i;
        if (inside | outside) & bit != 0 {
            rec(i + 1, inside, outside, up, down, out);
            return;
        }
        rec(i + 1, inside | up[i], outside, up, down, out);
        rec(i + 1, inside, outside | down[i], up, down, out);
    }

    let mut out = Vec::new();
    rec(0, 0, 0, &up, &down, &mut out);
    Ok(out)
}
