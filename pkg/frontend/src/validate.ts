/** Client-side checks for the submit form.

These mirror the server's config rules so obvious mistakes never leave the
browser; the server remains the authority and its errors are still surfaced.
*/

export interface FormValues {
  file: File | null;
  model: string;
  language: string;
  numSpeakers: string;
  device: string;
  translate: boolean;
  gapTolerance: string;
}

export interface ValidationResult {
  ok: boolean;
  errors: Partial<Record<keyof FormValues, string>>;
}

export function validateForm(values: FormValues): ValidationResult {
  const errors: ValidationResult["errors"] = {};
  if (!values.file) {
    errors.file = "choose an audio or video file to transcribe";
  }
  if (values.translate && values.language !== "en") {
    errors.translate = "translation targets English; set the language to English to translate";
  }
  const speakers = values.numSpeakers.trim();
  if (speakers !== "auto" && speakers !== "off") {
    if (!/^\d+$/.test(speakers) || parseInt(speakers, 10) < 1) {
      errors.numSpeakers = "speakers must be 'auto', 'off' or a positive number";
    }
  }
  const gap = values.gapTolerance.trim();
  if (gap !== "") {
    const parsed = Number(gap);
    if (!Number.isFinite(parsed) || parsed < 0) {
      errors.gapTolerance = "gap tolerance must be a non-negative number of seconds";
    }
  }
  return { ok: Object.keys(errors).length === 0, errors };
}
