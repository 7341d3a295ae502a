//! Canonical column names and label tables.
//!
//! The interest-group table is sorted by canonical name; that order is the
//! column order used everywhere (CSV header, encoded matrices, reports).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Number of interest groups tracked per case.
pub const IG_COUNT: usize = 43;

/// `(canonical column name, display name)`, sorted by canonical name.
pub const INTEREST_GROUPS: [(&str, &str); IG_COUNT] = [
    ("aarp", "AARP"),
    ("afl_cio", "AFL-CIO"),
    ("afscme", "American Federation of State, County and Municipal Employees"),
    ("aipac", "American Israel Public Affairs Committee"),
    ("airlines", "Airlines"),
    ("american_bankers_assoc", "American Bankers Association"),
    ("american_council_life_insurance", "American Council of Life Insurance"),
    ("american_farm_bureau", "American Farm Bureau Federation"),
    ("american_hospital_assoc", "American Hospital Association"),
    ("american_legion", "American Legion"),
    ("american_medical_assoc", "American Medical Association"),
    ("american_trucking_assoc", "American Trucking Associations"),
    ("automobile_companies", "Automobile Companies"),
    ("chamber_of_commerce", "Chamber of Commerce"),
    ("christian_coalition", "Christian Coalition"),
    ("computer_companies", "Computer Software and Hardware"),
    ("credit_union_natl_assoc", "Credit Union National Association"),
    ("defense_contractors", "Defense Contractors"),
    ("electric_companies", "Electric Companies"),
    ("health_insurance_assoc", "Health Insurance Association"),
    ("independent_insurance_agents", "Independent Insurance Agents of America"),
    ("motion_picture_assoc", "Motion Picture Association of America"),
    ("natl_assoc_broadcasters", "National Association of Broadcasters"),
    ("natl_assoc_home_builders", "National Association of Home Builders"),
    ("natl_assoc_manufacturers", "National Association of Manufacturers"),
    ("natl_assoc_realtors", "National Association of Realtors"),
    ("natl_beer_wholesalers", "National Beer Wholesalers Association"),
    ("natl_education_assoc", "National Education Association"),
    ("natl_federation_independent_business", "National Federation of Independent Business"),
    ("natl_governors_assoc", "National Governors Association"),
    ("natl_restaurant_assoc", "National Restaurant Association"),
    ("natl_rifle_assoc", "National Rifle Association"),
    ("natl_right_to_life", "National Right to Life Committee"),
    ("oil_companies", "Oil Companies"),
    ("pharmaceutical_companies", "Pharmaceutical Research and Manufacturers"),
    ("recording_industry_assoc", "Recording Industry Association"),
    ("securities_investment_companies", "Securities and Investment Companies"),
    ("teamsters_union", "International Brotherhood of Teamsters"),
    ("telephone_companies", "Telephone Companies"),
    ("tobacco_companies", "Tobacco Companies"),
    ("trial_lawyers", "Association of Trial Lawyers"),
    ("united_auto_workers", "United Auto Workers Union"),
    ("universities", "Universities"),
];

pub fn ig_names() -> impl Iterator<Item = &'static str> {
    INTEREST_GROUPS.iter().map(|(name, _)| *name)
}

/// Position of an interest group in the canonical order.
pub fn ig_index(name: &str) -> Option<usize> {
    INTEREST_GROUPS
        .binary_search_by(|(canonical, _)| canonical.cmp(&name))
        .ok()
}

pub fn ig_display_name(index: usize) -> &'static str {
    INTEREST_GROUPS[index].1
}

/// Coarse policy domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolicyDomain {
    Economic,
    Foreign,
    SocialWelfare,
    Religious,
    Guns,
    Misc,
}

impl PolicyDomain {
    pub const ALL: [PolicyDomain; 6] = [
        PolicyDomain::Economic,
        PolicyDomain::Foreign,
        PolicyDomain::SocialWelfare,
        PolicyDomain::Religious,
        PolicyDomain::Guns,
        PolicyDomain::Misc,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PolicyDomain::Economic => "Economic",
            PolicyDomain::Foreign => "Foreign",
            PolicyDomain::SocialWelfare => "Social Welfare",
            PolicyDomain::Religious => "Religious",
            PolicyDomain::Guns => "Guns",
            PolicyDomain::Misc => "Misc",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PolicyDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PolicyDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyDomain::ALL
            .into_iter()
            .find(|d| d.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownLabel {
                kind: "policy domain",
                label: s.to_string(),
            })
    }
}

/// Fine-grained policy area. Every area belongs to exactly one domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolicyArea {
    Budget,
    CampaignFinance,
    CivilRights,
    Defense,
    EconomicsAndLabor,
    Education,
    Environment,
    ForeignPolicy,
    GovernmentReform,
    Guns,
    Health,
    Immigration,
    Miscellaneous,
    Race,
    Religion,
    SocialWelfare,
    Taxation,
    Terrorism,
    WelfareReform,
}

impl PolicyArea {
    pub const ALL: [PolicyArea; 19] = [
        PolicyArea::Budget,
        PolicyArea::CampaignFinance,
        PolicyArea::CivilRights,
        PolicyArea::Defense,
        PolicyArea::EconomicsAndLabor,
        PolicyArea::Education,
        PolicyArea::Environment,
        PolicyArea::ForeignPolicy,
        PolicyArea::GovernmentReform,
        PolicyArea::Guns,
        PolicyArea::Health,
        PolicyArea::Immigration,
        PolicyArea::Miscellaneous,
        PolicyArea::Race,
        PolicyArea::Religion,
        PolicyArea::SocialWelfare,
        PolicyArea::Taxation,
        PolicyArea::Terrorism,
        PolicyArea::WelfareReform,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PolicyArea::Budget => "Budget",
            PolicyArea::CampaignFinance => "Campaign Finance",
            PolicyArea::CivilRights => "Civil Rights",
            PolicyArea::Defense => "Defense",
            PolicyArea::EconomicsAndLabor => "Economics and Labor",
            PolicyArea::Education => "Education",
            PolicyArea::Environment => "Environment",
            PolicyArea::ForeignPolicy => "Foreign Policy",
            PolicyArea::GovernmentReform => "Government Reform",
            PolicyArea::Guns => "Guns",
            PolicyArea::Health => "Health",
            PolicyArea::Immigration => "Immigration",
            PolicyArea::Miscellaneous => "Miscellaneous",
            PolicyArea::Race => "Race",
            PolicyArea::Religion => "Religion",
            PolicyArea::SocialWelfare => "Social Welfare",
            PolicyArea::Taxation => "Taxation",
            PolicyArea::Terrorism => "Terrorism",
            PolicyArea::WelfareReform => "Welfare Reform",
        }
    }

    /// The fixed area-to-domain table.
    pub fn domain(self) -> PolicyDomain {
        use PolicyArea::*;
        match self {
            Budget | EconomicsAndLabor | Taxation | Environment => PolicyDomain::Economic,
            ForeignPolicy | Defense | Terrorism => PolicyDomain::Foreign,
            SocialWelfare | WelfareReform | Health | Education => PolicyDomain::SocialWelfare,
            Religion => PolicyDomain::Religious,
            Guns => PolicyDomain::Guns,
            CampaignFinance | CivilRights | GovernmentReform | Immigration | Miscellaneous
            | Race => PolicyDomain::Misc,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PolicyArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PolicyArea {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyArea::ALL
            .into_iter()
            .find(|a| a.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownLabel {
                kind: "policy area",
                label: s.to_string(),
            })
    }
}

pub const CASE_ID: &str = "case_id";
pub const YEAR: &str = "year";
pub const OUTCOME: &str = "outcome";
pub const P90: &str = "p90";
pub const P50: &str = "p50";
pub const P10: &str = "p10";
pub const POLICY_AREA: &str = "policy_area";
pub const POLICY_DOMAIN: &str = "policy_domain";
/// Optional column carrying a precomputed netIGA for cross-checking.
pub const NET_IGA: &str = "net_iga";

/// The canonical CSV header, in order.
pub fn canonical_header() -> Vec<&'static str> {
    let mut header = vec![CASE_ID, YEAR, OUTCOME, P90, P50, P10];
    header.extend(ig_names());
    header.push(POLICY_AREA);
    header.push(POLICY_DOMAIN);
    header
}
