//! Closed-form constants, exponent profiles and the rule catalog.

mod constants;
mod profile;
mod rules;

pub use constants::{
    borne1, borne2, classic_star_floor, closed_form, crossing_point, extremal_star3, extremal_w2, fussball_floor,
    improved_star_floor, ssmj_floor, tomcat1, tomcat2, what2_ceiling, Surd, CLOSED_FORM_NAMES,
};
pub use profile::{inf_float, DegreeEntry, Exponent, ExponentProfile, Num, ProfileValue, Provenance};
pub use rules::{
    constants_csv, constants_row, consistency_check, evaluate_rule, um_corollary, um_degree, BoundReport, ConstantsRow,
    RuleId, RuleResult, RuleStatus, Verdict, CONSTANTS_HEADER, SLACK_TOLERANCE,
};
