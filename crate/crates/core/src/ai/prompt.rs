//! Prompt documents for the describer, tour guide and chat personas.

use serde::{Deserialize, Serialize};

use super::{GeoContext, UserProfile, DECLARATIONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DescriberMode {
    Default,
    TourGuide,
}

impl DescriberMode {
    pub fn name(self) -> &'static str {
        match self {
            DescriberMode::Default => "default",
            DescriberMode::TourGuide => "tour-guide",
        }
    }
}

/// Used when the user has not written a profile.
pub const DEFAULT_PROFILE_CLAUSE: &str = "Assume the user is blind and may use a white cane or a guide dog for mobility.";

pub const FOCUS_AREAS: [&str; 8] = [
    "Walking surfaces: sidewalks, paths, their width and condition.",
    "Street crossings: crosswalks, curb ramps, signals and islands.",
    "Obstacles and hazards in the walking path, including construction.",
    "Entrances, doors, steps and ramps of nearby buildings.",
    "Transit stops and street furniture such as benches and shelters.",
    "Signs and other readable text.",
    "Landmarks and businesses that help with orientation.",
    "Where things are relative to the viewer: ahead, left, right or behind, and roughly how far.",
];

fn profile_clause(profile: &UserProfile) -> String {
    match profile.description.as_deref().map(str::trim) {
        Some(text) if !text.is_empty() => format!("About the user, in their own words: {text}"),
        _ => DEFAULT_PROFILE_CLAUSE.to_string(),
    }
}

pub fn render_describer_prompt(ctx: &GeoContext, profile: &UserProfile, mode: DescriberMode) -> String {
    let mut s = String::new();
    match mode {
        DescriberMode::Default => {
            s.push_str(
                "Role: you narrate street-level photographs for a pedestrian who cannot see them. \
                 The photograph is one view from a street panorama the user is exploring with a keyboard and screen reader.\n\n",
            );
        }
        DescriberMode::TourGuide => {
            s.push_str(
                "Role: you are a tour guide leading a virtual walk for a visitor who cannot see. \
                 The photograph is one view from a street panorama the visitor is exploring with a keyboard and screen reader.\n\n",
            );
        }
    }
    s.push_str(&profile_clause(profile));
    s.push_str("\n\nPay attention to:\n");
    for (i, area) in FOCUS_AREAS.iter().enumerate() {
        s.push_str(&format!("{}. {area}\n", i + 1));
    }
    if mode == DescriberMode::TourGuide {
        s.push_str(
            "\nAlso bring in what a guide would add: historical facts, cultural significance, architectural styles, \
             short anecdotes, popular attractions close by, and what people in the scene are doing.\n",
        );
    }
    s.push_str(
        "\nRules:\n\
         - Use the present tense.\n\
         - Describe positions from the user's point of view, using ahead, left, right and behind.\n\
         - Use plain words and skip colors or details that do not help.\n\
         - Do not guess. If something is unclear in the image, say so.\n\
         - Limit the description to 2 or 3 sentences.\n",
    );
    s.push_str("\nLocation context:\n");
    s.push_str(&ctx.to_prompt_text());
    s
}

/// The describer prompt plus the schema for the structured variant.
pub fn render_structured_suffix() -> &'static str {
    "\nRespond with a JSON object with these fields and nothing else:\n\
     {\"description\": string, \"mobility_features\": [string], \"obstacles\": [string], \
     \"safety_summary\": string, \"followups\": [string, string, string]}\n\
     The followups are exactly three questions the user might ask next about this scene.\n"
}

pub fn render_chat_prompt(profile: &UserProfile) -> String {
    let mut s = String::from(
        "Role: you are a conversational companion for a user exploring streets virtually without sight. \
         Each time their view changes you receive the new image and a location summary.\n\n",
    );
    s.push_str(&profile_clause(profile));
    s.push_str(
        "\n\nRules:\n\
         - Answer from the images and location summaries you have received in this conversation.\n\
         - Keep answers short and say where things are relative to the user.\n\
         - If you cannot tell from what you have seen, say so.\n\
         - When the user asks to move or turn, call the matching function instead of describing the move.\n\nFunctions:\n",
    );
    for d in DECLARATIONS {
        s.push_str(&format!("- {}: {}\n", d.name, d.description));
    }
    s
}
