use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TaskKind {
    /// The user can judge the model output against prior knowledge.
    Emulation,
    /// No ground truth or expertise is available to judge the output.
    Discovery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Perspective {
    Actor,
    Observer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Expertise {
    Novice,
    Expert,
}

/// Description of a deployed model as seen by its users.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModelProfile")]
pub struct ModelProfile {
    pub task_kind: TaskKind,
    pub target_judgeable_by_user: bool,
    pub perspective: Perspective,
    /// Drops the enabling-factor row for intentional actions.
    #[serde(default)]
    pub pragmatic_goal_focus: bool,
    /// Adds the reason/actors row for experiences explained by situation causes.
    #[serde(default)]
    pub situation_cause_recall: bool,
}

#[derive(Deserialize)]
struct RawModelProfile {
    task_kind: TaskKind,
    target_judgeable_by_user: bool,
    perspective: Perspective,
    #[serde(default)]
    pragmatic_goal_focus: bool,
    #[serde(default)]
    situation_cause_recall: bool,
}

impl TryFrom<RawModelProfile> for ModelProfile {
    type Error = Error;

    fn try_from(raw: RawModelProfile) -> Result<Self> {
        let profile = ModelProfile {
            task_kind: raw.task_kind,
            target_judgeable_by_user: raw.target_judgeable_by_user,
            perspective: raw.perspective,
            pragmatic_goal_focus: raw.pragmatic_goal_focus,
            situation_cause_recall: raw.situation_cause_recall,
        };
        profile.validate()?;
        Ok(profile)
    }
}

impl ModelProfile {
    pub fn new(
        task_kind: TaskKind,
        target_judgeable_by_user: bool,
        perspective: Perspective,
    ) -> Result<Self> {
        let profile = ModelProfile {
            task_kind,
            target_judgeable_by_user,
            perspective,
            pragmatic_goal_focus: false,
            situation_cause_recall: false,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn pragmatic_goal_focus(mut self, on: bool) -> Self {
        self.pragmatic_goal_focus = on;
        self
    }

    pub fn situation_cause_recall(mut self, on: bool) -> Self {
        self.situation_cause_recall = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.task_kind == TaskKind::Emulation && !self.target_judgeable_by_user {
            return Err(Error::InvalidProfile(
                "an emulation task requires a target the user can judge".into(),
            ));
        }
        Ok(())
    }

    /// Corporate-loan rating reviewed by an expert officer.
    pub fn credit() -> Self {
        ModelProfile {
            task_kind: TaskKind::Emulation,
            target_judgeable_by_user: true,
            perspective: Perspective::Actor,
            pragmatic_goal_focus: true,
            situation_cause_recall: false,
        }
    }

    /// Question answering over reference documents.
    pub fn documentation() -> Self {
        ModelProfile {
            task_kind: TaskKind::Discovery,
            target_judgeable_by_user: false,
            perspective: Perspective::Observer,
            pragmatic_goal_focus: false,
            situation_cause_recall: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserProfile {
    pub expertise: Expertise,
    #[serde(default)]
    pub role: String,
}

impl UserProfile {
    pub fn new(expertise: Expertise, role: impl Into<String>) -> Self {
        UserProfile {
            expertise,
            role: role.into(),
        }
    }
}

/// A model profile paired with the user it is explained to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfilePair {
    pub model: ModelProfile,
    pub user: UserProfile,
}

impl ProfilePair {
    pub fn credit() -> Self {
        ProfilePair {
            model: ModelProfile::credit(),
            user: UserProfile::new(Expertise::Expert, "loan officer"),
        }
    }

    pub fn documentation() -> Self {
        ProfilePair {
            model: ModelProfile::documentation(),
            user: UserProfile::new(Expertise::Novice, "analyst"),
        }
    }
}
