//! Speech output plumbing: one voice per channel and a configurable rate.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use srai_core::announce::{Channel, FragmentKind, StatusMessage};

pub const STATUS_VOICE: &str = "en-US-Wavenet-J";
pub const CHAT_VOICE: &str = "en-US-Wavenet-G";
pub const MIN_RATE: f32 = 0.25;
pub const MAX_RATE: f32 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoiceSettings {
    pub status_voice: String,
    pub chat_voice: String,
    pub rate: f32,
}

impl Default for VoiceSettings {
    fn default() -> Self {
        VoiceSettings { status_voice: STATUS_VOICE.into(), chat_voice: CHAT_VOICE.into(), rate: 1.0 }
    }
}

impl VoiceSettings {
    pub fn with_rate(rate: f32) -> Result<VoiceSettings, SpeechError> {
        if !(MIN_RATE..=MAX_RATE).contains(&rate) {
            return Err(SpeechError(format!("speech rate must be within {MIN_RATE}..={MAX_RATE}, got {rate}")));
        }
        Ok(VoiceSettings { rate, ..VoiceSettings::default() })
    }

    pub fn voice_for(&self, channel: Channel) -> &str {
        match channel {
            Channel::Status => &self.status_voice,
            Channel::Chat => &self.chat_voice,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Utterance {
    pub text: String,
    pub voice: String,
    pub rate: f32,
    pub channel: Channel,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("speech: {0}")]
pub struct SpeechError(pub String);

pub trait SpeechProvider: Send + Sync {
    fn name(&self) -> &str;
    fn speak(&self, utterance: &Utterance) -> Result<(), SpeechError>;
    /// Cuts off whatever is playing.
    fn stop(&self);
}

/// Captures utterances instead of producing audio.
#[derive(Default)]
pub struct MockSpeech {
    spoken: Mutex<Vec<Utterance>>,
    stops: AtomicUsize,
}

impl MockSpeech {
    pub fn new() -> MockSpeech {
        MockSpeech::default()
    }

    pub fn spoken(&self) -> Vec<Utterance> {
        self.spoken.lock().unwrap().clone()
    }

    pub fn stops(&self) -> usize {
        self.stops.load(Ordering::SeqCst)
    }
}

impl SpeechProvider for MockSpeech {
    fn name(&self) -> &str {
        "mock"
    }

    fn speak(&self, utterance: &Utterance) -> Result<(), SpeechError> {
        log::debug!("speak [{} x{}] {}", utterance.voice, utterance.rate, utterance.text);
        self.spoken.lock().unwrap().push(utterance.clone());
        Ok(())
    }

    fn stop(&self) {
        self.stops.fetch_add(1, Ordering::SeqCst);
    }
}

/// Routes messages to a provider with the voice of their channel.
#[derive(Clone)]
pub struct Voicer {
    provider: Arc<dyn SpeechProvider>,
    settings: VoiceSettings,
}

impl Voicer {
    pub fn new(provider: Arc<dyn SpeechProvider>, settings: VoiceSettings) -> Voicer {
        Voicer { provider, settings }
    }

    pub fn settings(&self) -> &VoiceSettings {
        &self.settings
    }

    pub fn voice(&self, messages: &[StatusMessage]) {
        for m in messages {
            if m.text.is_empty() {
                if m.has(FragmentKind::Signal) {
                    self.provider.stop();
                }
                continue;
            }
            let u = Utterance {
                text: m.text.clone(),
                voice: self.settings.voice_for(m.channel).to_string(),
                rate: self.settings.rate,
                channel: m.channel,
            };
            if let Err(e) = self.provider.speak(&u) {
                log::warn!("{} provider failed: {e}", self.provider.name());
            }
        }
    }
}
