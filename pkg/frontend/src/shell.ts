/** Static page shell and stylesheet.

The server delivers this markup as-is; the script then enhances it in place
(fills the model picker, wires the form, renders job rows). Keeping it in one
module lets the build and the tests share the exact bytes.
*/

// Mirror of the server's supported language codes; there is no API endpoint
// for these, so the picker carries its own copy.
export const LANGUAGES: readonly string[] = [
  "af", "ar", "az", "be", "bg", "bs", "ca", "cs", "cy", "da",
  "de", "el", "en", "es", "et", "fa", "fi", "fr", "gl", "he",
  "hi", "hr", "hu", "hy", "id", "is", "it", "ja", "kk", "kn",
  "ko", "lt", "lv", "mi", "mk", "mr", "ms", "ne", "nl", "no",
  "pl", "pt", "ro", "ru", "sk", "sl", "sr", "sv", "sw", "ta",
  "th", "tl", "tr", "uk", "ur", "vi", "zh",
];

function languageLabel(code: string): string {
  try {
    const names = new Intl.DisplayNames(["en"], { type: "language" });
    return names.of(code) ?? code;
  } catch {
    return code;
  }
}

function languageOptions(): string {
  const options = ['<option value="auto" selected>Detect automatically</option>'];
  for (const code of LANGUAGES) {
    options.push(`<option value="${code}">${languageLabel(code)} (${code})</option>`);
  }
  return options.join("\n        ");
}

function speakerOptions(): string {
  const options = [
    '<option value="auto" selected>Detect automatically</option>',
    '<option value="off">No speaker detection</option>',
  ];
  for (let n = 1; n <= 8; n += 1) {
    options.push(`<option value="${n}">${n}</option>`);
  }
  return options.join("\n        ");
}

export const SHELL_HTML = `
<header class="site-header">
  <h1>atrain</h1>
  <p class="tagline">Local transcription with speaker detection. Nothing leaves this machine.</p>
</header>
<div id="conn-banner" class="banner" hidden>
  Cannot reach the transcription server. It may be stopped; your form entries are kept.
</div>
<main>
  <section class="card">
    <h2>New transcription</h2>
    <form id="submit-form" novalidate>
      <div class="field">
        <label for="field-file">Recording</label>
        <input type="file" id="field-file" name="file" accept="audio/*,video/*">
        <span class="field-error" data-error-for="file" hidden></span>
      </div>
      <div class="field">
        <label for="field-model">Model</label>
        <select id="field-model" name="model">
          <option value="medium" selected>medium</option>
        </select>
      </div>
      <div class="field">
        <label for="field-language">Language</label>
        <select id="field-language" name="language">
        ${languageOptions()}
        </select>
      </div>
      <div class="field">
        <label for="field-speakers">Speakers</label>
        <select id="field-speakers" name="speakers">
        ${speakerOptions()}
        </select>
        <p class="hint" id="speakers-hint">
          Auto-detection works, but if you know how many people speak, picking
          the exact count gives better speaker attribution.
        </p>
        <span class="field-error" data-error-for="numSpeakers" hidden></span>
      </div>
      <div class="field field-inline">
        <label for="field-translate">
          <input type="checkbox" id="field-translate" name="translate">
          Translate to English
        </label>
        <span class="field-error" data-error-for="translate" hidden></span>
      </div>
      <details class="advanced">
        <summary>Advanced</summary>
        <div class="field">
          <label for="field-device">Device</label>
          <select id="field-device" name="device">
            <option value="auto" selected>auto</option>
            <option value="cpu">cpu</option>
            <option value="gpu">gpu</option>
          </select>
        </div>
        <div class="field">
          <label for="field-gap">Paragraph gap tolerance (seconds)</label>
          <input type="text" id="field-gap" name="gap" value="2.0" inputmode="decimal">
          <span class="field-error" data-error-for="gapTolerance" hidden></span>
        </div>
      </details>
      <button type="submit" id="submit-btn">Transcribe</button>
      <p class="form-error" id="form-error" hidden></p>
    </form>
  </section>
  <section class="card">
    <h2>Jobs</h2>
    <ul id="job-list"></ul>
    <p id="jobs-empty">No jobs yet. Upload a recording above to start one.</p>
  </section>
</main>
<div id="toasts" aria-live="polite"></div>
`;

export const PAGE_CSS = `
:root {
  --bg: #f5f6f8;
  --card: #ffffff;
  --ink: #1c2330;
  --muted: #5b6572;
  --line: #d9dee5;
  --accent: #2458c5;
  --ok: #1d7a3e;
  --bad: #b3261e;
  --warn-bg: #fdeeee;
}
* { box-sizing: border-box; }
body {
  margin: 0;
  font-family: system-ui, -apple-system, "Segoe UI", sans-serif;
  background: var(--bg);
  color: var(--ink);
  line-height: 1.45;
}
.site-header { padding: 1.2rem 1.5rem 0.4rem; }
.site-header h1 { margin: 0; font-size: 1.6rem; }
.tagline { margin: 0.2rem 0 0; color: var(--muted); }
main { max-width: 860px; margin: 0 auto; padding: 1rem 1.5rem 3rem; }
.card {
  background: var(--card);
  border: 1px solid var(--line);
  border-radius: 10px;
  padding: 1rem 1.25rem;
  margin-top: 1rem;
}
.card h2 { margin: 0 0 0.75rem; font-size: 1.15rem; }
.field { margin-bottom: 0.8rem; }
.field label { display: block; font-weight: 600; margin-bottom: 0.2rem; }
.field-inline label { display: inline-flex; gap: 0.4rem; align-items: center; }
.field select, .field input[type="text"], .field input[type="file"] {
  width: 100%;
  max-width: 28rem;
  padding: 0.35rem 0.5rem;
  border: 1px solid var(--line);
  border-radius: 6px;
  background: var(--card);
  color: var(--ink);
  font: inherit;
}
.hint { margin: 0.25rem 0 0; color: var(--muted); font-size: 0.85rem; max-width: 28rem; }
.advanced { margin: 0.6rem 0 0.8rem; }
.advanced summary { cursor: pointer; color: var(--muted); }
.advanced .field { margin-top: 0.6rem; }
.field-error, .form-error { color: var(--bad); font-size: 0.88rem; display: block; margin-top: 0.2rem; }
.banner {
  background: var(--warn-bg);
  color: var(--bad);
  border-bottom: 1px solid var(--bad);
  padding: 0.5rem 1.5rem;
}
button {
  font: inherit;
  border: 1px solid var(--accent);
  background: var(--accent);
  color: #fff;
  border-radius: 6px;
  padding: 0.45rem 1.1rem;
  cursor: pointer;
}
button:disabled { opacity: 0.6; cursor: wait; }
button.delete-btn {
  background: transparent;
  color: var(--bad);
  border-color: var(--bad);
  padding: 0.25rem 0.7rem;
  font-size: 0.85rem;
}
#job-list { list-style: none; margin: 0; padding: 0; }
#jobs-empty { color: var(--muted); }
.job-row { border-top: 1px solid var(--line); padding: 0.75rem 0; }
.job-row:first-child { border-top: none; }
.job-head { display: flex; align-items: baseline; gap: 0.6rem; flex-wrap: wrap; }
.job-name { font-weight: 600; }
.job-elapsed { color: var(--muted); font-size: 0.85rem; margin-left: auto; }
.badge {
  font-size: 0.75rem;
  font-weight: 700;
  letter-spacing: 0.03em;
  padding: 0.1rem 0.5rem;
  border-radius: 999px;
  border: 1px solid transparent;
}
.badge-queued { background: #eef1f5; color: var(--muted); border-color: var(--line); }
.badge-running { background: #e8effc; color: var(--accent); border-color: #b9cdf2; }
.badge-done { background: #e7f3ec; color: var(--ok); border-color: #bcdcc8; }
.badge-failed { background: var(--warn-bg); color: var(--bad); border-color: #e4b4b1; }
.progress {
  height: 6px;
  background: #e8ebf0;
  border-radius: 999px;
  overflow: hidden;
  margin: 0.45rem 0;
  max-width: 34rem;
}
.progress-fill { height: 100%; background: var(--accent); width: 0; transition: width 0.3s; }
.job-meta { color: var(--muted); font-size: 0.85rem; }
.job-error {
  margin-top: 0.4rem;
  background: var(--warn-bg);
  color: var(--bad);
  border-radius: 6px;
  padding: 0.4rem 0.6rem;
  font-size: 0.88rem;
  font-family: ui-monospace, monospace;
}
.job-actions { margin-top: 0.5rem; display: flex; gap: 0.7rem; flex-wrap: wrap; align-items: center; }
.job-actions a { color: var(--accent); font-size: 0.88rem; }
#toasts { position: fixed; right: 1rem; bottom: 1rem; display: flex; flex-direction: column; gap: 0.5rem; }
.toast {
  background: var(--ink);
  color: #fff;
  padding: 0.5rem 0.9rem;
  border-radius: 8px;
  font-size: 0.9rem;
  box-shadow: 0 4px 14px rgba(0, 0, 0, 0.25);
}
`;

/** Assemble the complete page around a pre-bundled script. */
export function renderPage(scriptJs: string): string {
  return `<!doctype html>
<html lang="en">
<head>
<meta charset="utf-8">
<meta name="viewport" content="width=device-width, initial-scale=1">
<title>atrain</title>
<style>${PAGE_CSS}</style>
</head>
<body>
${SHELL_HTML}
<noscript><p class="banner">This interface needs JavaScript to talk to the local server.</p></noscript>
<script>${scriptJs}</script>
</body>
</html>
`;
}
