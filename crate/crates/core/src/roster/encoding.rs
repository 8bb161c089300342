//! Rule templates of the team-building encoding.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::asp::{parse_program, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingMode {
    Strict,
    Prioritized,
    Check,
    Explain,
}

impl fmt::Display for EncodingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingMode::Strict => "strict",
            EncodingMode::Prioritized => "prioritized",
            EncodingMode::Check => "check",
            EncodingMode::Explain => "explain",
        })
    }
}

impl FromStr for EncodingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(EncodingMode::Strict),
            "prioritized" => Ok(EncodingMode::Prioritized),
            "check" => Ok(EncodingMode::Check),
            "explain" => Ok(EncodingMode::Explain),
            _ => Err(format!("unknown encoding mode `{s}`")),
        }
    }
}

const AVAILABILITY: &str = "
exceedTimeLimit(Em,Sh) :- shift(Sh,D), workedWeeklyHours(Em,Wh), weekHours(Hmax), D + Wh > Hmax.
exceedTimeLimit(Em,Sh) :- shift(Sh,D), workedDailyHours(Em,Wh), dailyHours(Hmax), D + Wh > Hmax.
exceedTimeLimit(Em,Sh) :- shift(Sh,D), workedWeekOvertimeHours(Em,Wh), weekOvertime(Hmax), D + Wh > Hmax.
canBeAssigned(Em,Sh,Sk) :- hasSkill(Em,Sk), neededEmployees(Sh,Sk,_), not absent(Em,Sh),
    not manuallyExcluded(Em,Sh), not exceedTimeLimit(Em,Sh).
";

const PREFERENCES: &str = "
prefByTurnover(E1,E2,Sh,Sk) :- heavyRole(Sk), canBeAssigned(E1,Sh,Sk), canBeAssigned(E2,Sh,Sk),
    lastAllocation(E1,Sk,D1), lastAllocation(E2,Sk,D2), D1 < D2.
prefByFairness(E1,E2,Sh,Sk) :- fairGap(G), workedWeeklyHours(E1,W1), workedWeeklyHours(E2,W2),
    canBeAssigned(E1,Sh,Sk), canBeAssigned(E2,Sh,Sk), W1 + G < W2.
prefByCrucial(E1,E2,Sh,Sk) :- hasCrucial(E1,N1), hasCrucial(E2,N2),
    canBeAssigned(E1,Sh,Sk), canBeAssigned(E2,Sh,Sk), N1 < N2.
";

const GUESS: &str = "
assign(Em,Sh,Sk) v nAssign(Em,Sh,Sk) :- canBeAssigned(Em,Sh,Sk).
";

const ELIGIBILITY: &str = "
:- assign(Em,Sh,Sk), not canBeAssigned(Em,Sh,Sk).
";

const HARD: &str = "
:- neededEmployees(Sh,Sk,N), #count{Em: assign(Em,Sh,Sk)} != N.
:- assign(Em,Sh,Sk1), assign(Em,Sh,Sk2), Sk1 != Sk2.
";

const SINGLE_SHIFT: &str = "
:- assign(Em,Sh1,_), assign(Em,Sh2,_), Sh1 != Sh2.
";

const DOUBLE_COMMON: &str = "
doubleLinked(A,B) :- isDouble(A,B).
doubleLinked(A,B) :- isDouble(B,A).
assigned(Em,Sh) :- assign(Em,Sh,_).
";

const DOUBLE_HARD: &str = "
:- assign(Em,Sh1,_), assign(Em,Sh2,_), Sh1 != Sh2, not doubleLinked(Sh1,Sh2).
:- isDouble(Ss,Sb), assigned(Em,Ss), not assigned(Em,Sb).
:- isDouble(S1,S2), assigned(Em,S1), assigned(Em,S2), shift(S1,D1), shift(S2,D2),
    workedWeeklyHours(Em,Wh), weekHours(Hmax), Wh + D1 + D2 > Hmax.
:- isDouble(S1,S2), assigned(Em,S1), assigned(Em,S2), shift(S1,D1), shift(S2,D2),
    workedDailyHours(Em,Wh), dailyHours(Hmax), Wh + D1 + D2 > Hmax.
:- isDouble(S1,S2), assigned(Em,S1), assigned(Em,S2), shift(S1,D1), shift(S2,D2),
    workedWeekOvertimeHours(Em,Wh), weekOvertime(Hmax), Wh + D1 + D2 > Hmax.
";

const STRICT_PREFERENCES: &str = "
:- prefByTurnover(E1,E2,Sh,Sk), assign(E2,Sh,Sk), not assign(E1,Sh,Sk).
:- prefByFairness(E1,E2,Sh,Sk), assign(E2,Sh,Sk), not assign(E1,Sh,Sk).
:- prefByCrucial(E1,E2,Sh,Sk), assign(E2,Sh,Sk), not assign(E1,Sh,Sk).
";

const PRIORITIZED_PREFERENCES: &str = "
turnoverRelated(E1,E2,Sh) :- prefByTurnover(E1,E2,Sh,_).
turnoverRelated(E1,E2,Sh) :- prefByTurnover(E2,E1,Sh,_).
fairnessRelated(E1,E2,Sh) :- prefByFairness(E1,E2,Sh,_).
fairnessRelated(E1,E2,Sh) :- prefByFairness(E2,E1,Sh,_).
:- prefByTurnover(E1,E2,Sh,Sk), assign(E2,Sh,Sk), not assign(E1,Sh,Sk).
:- prefByFairness(E1,E2,Sh,Sk), assign(E2,Sh,Sk), not assign(E1,Sh,Sk), not turnoverRelated(E1,E2,Sh).
:- prefByCrucial(E1,E2,Sh,Sk), assign(E2,Sh,Sk), not assign(E1,Sh,Sk),
    not turnoverRelated(E1,E2,Sh), not fairnessRelated(E1,E2,Sh).
";

const EXPLAIN: &str = "
violatedEligibility(Em,Sh,Sk) :- assign(Em,Sh,Sk), not canBeAssigned(Em,Sh,Sk).
violatedTurnover(E1,E2,Sh,Sk) :- prefByTurnover(E1,E2,Sh,Sk), assign(E2,Sh,Sk), not assign(E1,Sh,Sk).
violatedFairness(E1,E2,Sh,Sk) :- prefByFairness(E1,E2,Sh,Sk), assign(E2,Sh,Sk), not assign(E1,Sh,Sk).
violatedCrucial(E1,E2,Sh,Sk) :- prefByCrucial(E1,E2,Sh,Sk), assign(E2,Sh,Sk), not assign(E1,Sh,Sk).
violatedCount(Sh,Sk,N) :- neededEmployees(Sh,Sk,N), #count{Em: assign(Em,Sh,Sk)} != N.
violatedMultiRole(Em,Sh,Sk1,Sk2) :- assign(Em,Sh,Sk1), assign(Em,Sh,Sk2), Sk1 != Sk2.
";

const EXPLAIN_SINGLE_SHIFT: &str = "
violatedMultiShift(Em,Sh1,Sh2) :- assign(Em,Sh1,_), assign(Em,Sh2,_), Sh1 != Sh2.
";

const EXPLAIN_DOUBLE: &str = "
violatedMultiShift(Em,Sh1,Sh2) :- assign(Em,Sh1,_), assign(Em,Sh2,_), Sh1 != Sh2, not doubleLinked(Sh1,Sh2).
violatedDoubleShift(Em,Ss,Sb) :- isDouble(Ss,Sb), assigned(Em,Ss), not assigned(Em,Sb).
violatedTimeLimit(Em,S1,S2) :- isDouble(S1,S2), assigned(Em,S1), assigned(Em,S2), shift(S1,D1), shift(S2,D2),
    workedWeeklyHours(Em,Wh), weekHours(Hmax), Wh + D1 + D2 > Hmax.
violatedTimeLimit(Em,S1,S2) :- isDouble(S1,S2), assigned(Em,S1), assigned(Em,S2), shift(S1,D1), shift(S2,D2),
    workedDailyHours(Em,Wh), dailyHours(Hmax), Wh + D1 + D2 > Hmax.
violatedTimeLimit(Em,S1,S2) :- isDouble(S1,S2), assigned(Em,S1), assigned(Em,S2), shift(S1,D1), shift(S2,D2),
    workedWeekOvertimeHours(Em,Wh), weekOvertime(Hmax), Wh + D1 + D2 > Hmax.
";

/// Rules for `mode`; check mode uses the strict preference constraints.
pub fn build_encoding(mode: EncodingMode, has_double_shifts: bool) -> Program {
    build(mode, has_double_shifts, false)
}

/// Check mode with the prioritized preference constraints, so that a
/// degraded team re-checks as acceptable.
pub fn build_prioritized_check_encoding(has_double_shifts: bool) -> Program {
    build(EncodingMode::Check, has_double_shifts, true)
}

fn build(mode: EncodingMode, double: bool, prioritized_check: bool) -> Program {
    let mut parts = vec![AVAILABILITY, PREFERENCES];
    if double {
        parts.push(DOUBLE_COMMON);
    }
    match mode {
        EncodingMode::Explain => {
            parts.push(EXPLAIN);
            parts.push(if double { EXPLAIN_DOUBLE } else { EXPLAIN_SINGLE_SHIFT });
        }
        _ => {
            if matches!(mode, EncodingMode::Check) {
                parts.push(ELIGIBILITY);
            } else {
                parts.push(GUESS);
            }
            parts.push(HARD);
            if double {
                parts.push(DOUBLE_HARD);
            } else {
                parts.push(SINGLE_SHIFT);
            }
            let prioritized = mode == EncodingMode::Prioritized || prioritized_check;
            parts.push(if prioritized { PRIORITIZED_PREFERENCES } else { STRICT_PREFERENCES });
        }
    }
    parse_program(&parts.concat()).expect("encoding templates parse")
}
