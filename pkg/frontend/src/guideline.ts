/** The annotation walkthrough shown beside the editor. Reviewers follow it
 * by hand; the console never auto-applies it. */

export interface GuidelineStep {
  question: string;
  yes: string;
  no: string;
}

export const GUIDELINE: GuidelineStep[] = [
  {
    question: "Does the topic carry actionable, real-time crisis information?",
    yes: "Pick every situational-awareness category it serves: fire operations, public health and safety, emergency resources, recovery, loss and damage, influential figures.",
    no: "Still pick the closest situational-awareness category; coverage is total.",
  },
  {
    question: "Does the discussion frame a story about the crisis?",
    yes: "Add each matching narrative: blame (responsibility, failures), renewal (rebuilding, healing), victim (losses, displacement), hero (responders, volunteers).",
    no: "Leave the crisis-narrative set empty.",
  },
  {
    question: "Are there explicit expressions of emotional loss or mourning?",
    yes: "Set the grief flag.",
    no: "Leave grief off.",
  },
  {
    question: "Are there signals of psychological distress or self-identified vulnerability?",
    yes: "Set the mental-health flag.",
    no: "Leave mental health off.",
  },
  {
    question: "Unsure after reading keywords and representative documents?",
    yes: "Keep your best-guess labels and leave a note in the tracker; topics flagged needs_review sort first.",
    no: "Save; your decision replaces the automatic labels entirely.",
  },
];
