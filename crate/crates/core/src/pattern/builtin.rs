//! The named patterns of the catalogue.

use std::fmt;
use std::str::FromStr;

use super::Pattern;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternName {
    Btp,
    BtpVo,
    BtpDo,
    Mc,
    Emc,
    EmcMinus,
    Btx,
    Bti,
    Lx,
    LxLt,
    VGt,
    VGtLt,
    P,
    Q,
    BadA,
    BadB,
    BadC,
    /// Also known as `T1`.
    BadD,
    BadE,
    BadF,
    BadG,
    BadH,
    BadI,
    BadJ,
    BadK,
    BadL,
    BadM,
    BadN,
    BadO,
    BadP,
    BadQ,
    BadR,
    BadS,
}

use PatternName::*;

const ALL: [PatternName; 33] = [
    Btp, BtpVo, BtpDo, Mc, Emc, EmcMinus, Btx, Bti, Lx, LxLt, VGt, VGtLt, P, Q, BadA, BadB, BadC, BadD, BadE, BadF,
    BadG, BadH, BadI, BadJ, BadK, BadL, BadM, BadN, BadO, BadP, BadQ, BadR, BadS,
];

impl PatternName {
    pub fn all() -> impl Iterator<Item = PatternName> {
        ALL.into_iter()
    }

    /// The nineteen patterns `BAD_A` to `BAD_S`.
    pub fn bad() -> impl Iterator<Item = PatternName> {
        ALL.into_iter().filter(|n| n.as_str().starts_with("BAD_"))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Btp => "BTP",
            BtpVo => "BTP_vo",
            BtpDo => "BTP_do",
            Mc => "MC",
            Emc => "EMC",
            EmcMinus => "EMC_minus",
            Btx => "BTX",
            Bti => "BTI",
            Lx => "LX",
            LxLt => "LX_lt",
            VGt => "V_gt",
            VGtLt => "V_gt_lt",
            P => "P",
            Q => "Q",
            BadA => "BAD_A",
            BadB => "BAD_B",
            BadC => "BAD_C",
            BadD => "BAD_D",
            BadE => "BAD_E",
            BadF => "BAD_F",
            BadG => "BAD_G",
            BadH => "BAD_H",
            BadI => "BAD_I",
            BadJ => "BAD_J",
            BadK => "BAD_K",
            BadL => "BAD_L",
            BadM => "BAD_M",
            BadN => "BAD_N",
            BadO => "BAD_O",
            BadP => "BAD_P",
            BadQ => "BAD_Q",
            BadR => "BAD_R",
            BadS => "BAD_S",
        }
    }
}

impl fmt::Display for PatternName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatternName {
    type Err = Error;

    /// Case-insensitive; `T1` is accepted for `BAD_D`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let lower = s.to_ascii_lowercase();
        if lower == "t1" {
            return Ok(BadD);
        }
        ALL.into_iter()
            .find(|n| n.as_str().to_ascii_lowercase() == lower)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

// y holds alpha > beta, x the single point eps, z holds gamma > delta.
fn emc_edges() -> super::PatternBuilder {
    Pattern::builder()
        .var("y", &["alpha", "beta"])
        .var("x", &["eps"])
        .var("z", &["gamma", "delta"])
        .neg("y.alpha", "z.gamma")
        .neg("x", "z.delta")
        .pos("y.alpha", "z.delta")
        .pos("y.beta", "z.gamma")
        .pos("y.alpha", "x")
        .pos("x", "z.gamma")
}

fn btp() -> super::PatternBuilder {
    Pattern::builder()
        .var("x", &["a"])
        .var("y", &["b"])
        .var("z", &["gamma", "delta"])
        .neg("y", "z.gamma")
        .neg("x", "z.delta")
        .pos("y", "z.delta")
        .pos("x", "y")
        .pos("x", "z.gamma")
        .var_lt("x", "z")
        .var_lt("y", "z")
}

fn v_gt() -> super::PatternBuilder {
    Pattern::builder()
        .var("x", &["a"])
        .var("z", &["gamma", "delta"])
        .pos("x", "z.gamma")
        .neg("x", "z.delta")
        .dom_lt("z.delta", "z.gamma")
}

impl Pattern {
    pub fn builtin(name: PatternName) -> Pattern {
        let b = match name {
            Btp => btp(),
            BtpVo => btp().var_lt("x", "y"),
            BtpDo => btp().dom_lt("z.delta", "z.gamma"),
            Mc => Pattern::builder()
                .var("x", &["alpha", "beta"])
                .var("y", &["gamma", "delta"])
                .neg("x.alpha", "y.gamma")
                .pos("x.alpha", "y.delta")
                .pos("x.beta", "y.gamma")
                .dom_lt("x.beta", "x.alpha")
                .dom_lt("y.delta", "y.gamma"),
            Emc => emc_edges()
                .var_lt("y", "z")
                .dom_lt("y.beta", "y.alpha")
                .dom_lt("z.delta", "z.gamma"),
            EmcMinus => emc_edges().dom_lt("y.beta", "y.alpha").dom_lt("z.delta", "z.gamma"),
            Btx => emc_edges().var_lt("y", "x").var_lt("y", "z").dom_lt("y.beta", "y.alpha"),
            Bti => emc_edges().var_lt("x", "z").dom_lt("y.beta", "y.alpha"),
            Lx | LxLt => {
                let b = Pattern::builder()
                    .var("y", &["alpha", "beta"])
                    .var("x", &["eps"])
                    .var("z", &["gamma", "delta"])
                    .neg("y.beta", "x")
                    .neg("x", "z.delta")
                    .pos("y.alpha", "z.delta")
                    .pos("y.beta", "z.gamma")
                    .pos("y.alpha", "x")
                    .pos("x", "z.gamma");
                if name == LxLt {
                    b.var_lt("y", "z")
                } else {
                    b
                }
            }
            VGt => v_gt(),
            VGtLt => v_gt().var_lt("x", "z"),
            P => Pattern::builder()
                .var("x", &["a"])
                .var("z", &["beta", "gamma", "delta"])
                .pos("x", "z.beta")
                .pos("x", "z.gamma")
                .neg("x", "z.delta")
                .dom_lt("z.gamma", "z.beta")
                .dom_lt("z.delta", "z.gamma"),
            Q => Pattern::builder()
                .var("x", &["a"])
                .var("z", &["beta", "gamma", "delta"])
                .pos("x", "z.beta")
                .pos("x", "z.gamma")
                .neg("x", "z.delta")
                .dom_lt("z.delta", "z.beta")
                .dom_lt("z.delta", "z.gamma"),
            BadA => Pattern::builder()
                .var("i", &["a", "b"])
                .var("j", &["e"])
                .var("k", &["c", "d"])
                .neg("i.a", "k.c")
                .pos("i.a", "k.d")
                .pos("i.b", "k.c")
                .pos("i.b", "j")
                .pos("j", "k.d"),
            BadB => Pattern::builder()
                .var("i", &["a", "b"])
                .var("j", &["e", "f"])
                .var("k", &["c", "d"])
                .neg("i.a", "k.c")
                .neg("j.e", "k.d")
                .pos("i.b", "k.c")
                .pos("j.f", "k.d")
                .pos("j.f", "i.b")
                .diseq("k.c", "k.d"),
            BadC => Pattern::builder()
                .var("i", &["a", "b"])
                .var("j", &["p"])
                .var("k", &["p"])
                .neg("i.a", "j")
                .dom_lt("i.b", "i.a")
                .var_lt("i", "k")
                .var_lt("j", "k"),
            BadD => Pattern::builder()
                .var("i", &["p"])
                .var("j", &["hi", "lo"])
                .var("k", &["p"])
                .neg("i", "j.hi")
                .neg("j.hi", "k")
                .pos("i", "j.lo")
                .pos("j.lo", "k"),
            BadE => Pattern::builder()
                .var("i", &["p"])
                .var("j", &["p"])
                .var("k", &["p"])
                .neg("i", "j")
                .neg("j", "k")
                .var_lt("j", "k"),
            BadF => Pattern::builder()
                .var("i", &["p"])
                .var("j", &["e", "f"])
                .var("k", &["p"])
                .neg("i", "j.e")
                .neg("j.f", "k")
                .diseq("j.e", "j.f")
                .var_lt("i", "j")
                .var_lt("j", "k"),
            BadG => Pattern::builder()
                .var("i", &["a", "b"])
                .var("k", &["c", "d"])
                .neg("i.a", "k.c")
                .neg("i.b", "k.d")
                .diseq("i.a", "i.b"),
            BadH => Pattern::builder()
                .var("i", &["a", "b"])
                .var("j", &["p"])
                .var("k", &["p"])
                .neg("i.a", "k")
                .neg("j", "k")
                .dom_lt("i.b", "i.a"),
            BadI => Pattern::builder()
                .var("i", &["p"])
                .var("j", &["p"])
                .var("k", &["c", "d"])
                .neg("i", "k.c")
                .neg("j", "k.c")
                .dom_lt("k.d", "k.c"),
            BadJ => Pattern::builder()
                .var("i", &["a", "b"])
                .var("j", &["p"])
                .var("k", &["p"])
                .neg("i.a", "k")
                .dom_lt("i.b", "i.a")
                .var_lt("i", "k")
                .var_lt("j", "k"),
            BadK => Pattern::builder()
                .var("i", &["a", "b"])
                .var("j", &["p"])
                .var("k", &["c", "d"])
                .neg("i.a", "k.c")
                .dom_lt("i.b", "i.a")
                .dom_lt("k.d", "k.c")
                .var_lt("j", "k"),
            BadL => Pattern::builder()
                .var("i", &["p"])
                .var("j", &["p"])
                .var("k", &["c", "d"])
                .neg("i", "k.d")
                .neg("j", "k.c")
                .dom_lt("k.d", "k.c")
                .var_lt("i", "j"),
            BadM => Pattern::builder()
                .var("i", &["a", "b"])
                .var("j", &["e", "f"])
                .var("k", &["c", "d"])
                .neg("i.a", "k.c")
                .neg("j.f", "k.d")
                .dom_lt("i.b", "i.a")
                .dom_lt("j.f", "j.e"),
            BadN => Pattern::builder()
                .var("i", &["p"])
                .var("j", &["p"])
                .var("k", &["c", "d"])
                .neg("i", "k.c")
                .pos("j", "i")
                .pos("j", "k.d")
                .diseq("k.c", "k.d"),
            BadO => Pattern::builder()
                .var("i", &["a", "b"])
                .var("k", &["c", "d"])
                .neg("i.b", "k.c")
                .dom_lt("i.b", "i.a")
                .dom_lt("k.d", "k.c"),
            BadP => Pattern::builder()
                .var("i", &["p"])
                .var("j", &["p"])
                .var("k", &["p"])
                .pos("i", "j")
                .pos("j", "k")
                .pos("i", "k"),
            BadQ => Pattern::builder()
                .var("i", &["p"])
                .var("j", &["p"])
                .var("k", &["p"])
                .pos("i", "j")
                .neg("i", "k")
                .neg("j", "k"),
            BadR => Pattern::builder()
                .var("i", &["a", "b"])
                .var("k", &["c", "d"])
                .pos("i.b", "k.d")
                .neg("i.a", "k.c")
                .diseq("i.a", "i.b")
                .diseq("k.c", "k.d"),
            BadS => Pattern::builder()
                .var("i", &["a", "b"])
                .var("k", &["p"])
                .pos("i.a", "k")
                .pos("i.b", "k")
                .diseq("i.a", "i.b"),
        };
        b.build().unwrap_or_else(|e| panic!("built-in pattern {name} is invalid: {e}"))
    }
}
