//! The seven arc-consistent unsatisfiable instances used as negative
//! certificates, and the table of patterns known not to occur in them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instance::{Instance, ValueUniverse};
use crate::order::TotalOrder;
use crate::pattern::PatternName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogName {
    IK4,
    I4,
    ISat2D,
    I5,
    ISat6,
    ISatK4,
    I2Col3,
}

use CatalogName::*;

impl CatalogName {
    pub const ALL: [CatalogName; 7] = [IK4, I4, ISat2D, I5, ISat6, ISatK4, I2Col3];

    pub fn as_str(self) -> &'static str {
        match self {
            IK4 => "I_K4",
            I4 => "I_4",
            ISat2D => "I_SAT_2D",
            I5 => "I_5",
            ISat6 => "I_SAT_6",
            ISatK4 => "I_SAT_K4",
            I2Col3 => "I_2COL_3",
        }
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CatalogName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct CatalogInstance {
    pub name: CatalogName,
    pub instance: Instance,
    /// Declaration order.
    pub canonical_var_order: TotalOrder,
    /// Universe order (numeric; Booleans as 0 < 1).
    pub canonical_dom_order: TotalOrder,
    /// Patterns of the table that do not occur in this instance.
    pub notes: Vec<PatternName>,
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn boolean(n: usize) -> Instance {
    Instance::with_uniform_domains(ValueUniverse::range(0, 1), n)
}

/// Adds a binary clause; `lx`/`ly` give the literal polarity (`true` means the
/// variable must be 1 to satisfy that literal). Variables are 1-based.
fn clause(inst: &mut Instance, x: usize, lx: bool, y: usize, ly: bool) {
    let (ex, ey) = (lx as i64, ly as i64);
    inst.add_constraint_fn(x - 1, y - 1, |a, b| a == ex || b == ey)
        .expect("catalogue constraint");
}

fn build(name: CatalogName) -> Instance {
    match name {
        IK4 => {
            let mut inst = Instance::with_uniform_domains(ValueUniverse::range(1, 3), 4);
            for (i, j) in [(1, 2), (2, 3), (3, 4), (4, 1)] {
                inst.add_constraint_fn(i - 1, j - 1, |a, b| a == 1 || b == 3).unwrap();
            }
            for (i, j) in [(1, 3), (2, 4)] {
                inst.add_constraint_fn(i - 1, j - 1, |a, b| a == 2 || b == 2).unwrap();
            }
            inst
        }
        I4 => {
            let mut inst = Instance::new(
                ValueUniverse::range(0, 3),
                names(&["x0", "x1", "x2", "x3"]),
                vec![vec![1, 2, 3], vec![0, 1], vec![0, 1], vec![0, 1]],
            )
            .unwrap();
            for (i, j) in [(1, 2), (1, 3), (2, 3)] {
                inst.add_constraint_fn(i, j, |a, b| a == 1 || b == 1).unwrap();
            }
            for i in 1..=3 {
                inst.add_constraint_fn(0, i, move |a, b| a == i as i64 || b == 0).unwrap();
            }
            inst
        }
        ISat2D => {
            let mut inst = boolean(5);
            clause(&mut inst, 1, true, 2, true);
            clause(&mut inst, 3, true, 4, true);
            clause(&mut inst, 1, false, 5, true);
            clause(&mut inst, 2, false, 5, true);
            clause(&mut inst, 3, false, 5, false);
            clause(&mut inst, 4, false, 5, false);
            inst
        }
        I5 => {
            let mut inst = Instance::new(
                ValueUniverse::range(0, 3),
                names(&["w1", "w2", "w3", "x1", "x2"]),
                vec![vec![0, 1], vec![0, 1], vec![0, 1], vec![1, 2, 3], vec![1, 2, 3]],
            )
            .unwrap();
            for i in 1..=3usize {
                let val = i as i64;
                inst.add_constraint_fn(i - 1, 3, move |w, x| w == 0 || x == val).unwrap();
                inst.add_constraint_fn(i - 1, 4, move |w, x| w == 1 || x == val).unwrap();
            }
            inst
        }
        ISat6 => {
            let mut inst = boolean(6);
            clause(&mut inst, 1, false, 2, false);
            clause(&mut inst, 1, true, 3, true);
            clause(&mut inst, 2, true, 3, true);
            clause(&mut inst, 3, false, 4, false);
            clause(&mut inst, 4, true, 5, true);
            clause(&mut inst, 4, true, 6, true);
            clause(&mut inst, 5, false, 6, false);
            inst
        }
        ISatK4 => {
            let mut inst = boolean(4);
            clause(&mut inst, 1, false, 2, false);
            clause(&mut inst, 3, true, 4, true);
            for (i, j) in [(1, 3), (1, 4), (2, 3), (2, 4)] {
                clause(&mut inst, i, true, j, false);
            }
            inst
        }
        I2Col3 => {
            let mut inst = boolean(3);
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                inst.add_constraint_fn(i, j, |a, b| a != b).unwrap();
            }
            inst
        }
    }
}

/// Pattern / instance pairs: each pattern does not occur in the instance.
pub fn fig13_table() -> Vec<(PatternName, CatalogName)> {
    use PatternName::*;
    vec![
        (BadA, IK4),
        (BadB, I4),
        (BadC, ISat2D),
        (BadD, I5),
        (BadE, I5),
        (BadF, I5),
        (BadG, ISat6),
        (BadH, ISat6),
        (BadI, ISat6),
        (BadJ, ISatK4),
        (BadK, ISatK4),
        (BadL, ISatK4),
        (BadM, ISatK4),
        (BadN, I2Col3),
        (BadO, I2Col3),
        (BadP, I2Col3),
        (BadQ, I2Col3),
        (BadR, I2Col3),
        (BadS, I2Col3),
    ]
}

pub fn catalog_instance(name: CatalogName) -> CatalogInstance {
    let instance = build(name);
    CatalogInstance {
        name,
        canonical_var_order: TotalOrder::identity(instance.num_vars()),
        canonical_dom_order: TotalOrder::identity(instance.universe().len()),
        notes: fig13_table().into_iter().filter(|&(_, i)| i == name).map(|(p, _)| p).collect(),
        instance,
    }
}

pub fn catalog_by_name(name: &str) -> Result<CatalogInstance> {
    Ok(catalog_instance(name.parse()?))
}

/// Catalogue instances from fewest points upward.
pub fn by_size() -> Vec<CatalogInstance> {
    let mut all: Vec<CatalogInstance> = CatalogName::ALL.into_iter().map(catalog_instance).collect();
    all.sort_by_key(|c| (c.instance.num_points(), c.instance.num_vars(), c.name));
    all
}
