import { ApiClient } from "./api.js";
import { button, clear, el } from "./dom.js";
import type { Role, Session } from "./types.js";
import { LabelingView } from "./views/labeling.js";
import { ValidationView } from "./views/validation.js";

interface ActiveView {
  stop(): void;
}

const app = document.getElementById("app");
if (!app) throw new Error("missing #app container");

let active: ActiveView | null = null;

function startSessionForm(): void {
  clear(app!);
  const form = el("div", "session-form");
  form.appendChild(el("h1", undefined, "ontoforge annotation"));

  const nameLabel = el("label", undefined, "your name");
  const nameInput = el("input");
  nameInput.placeholder = "e.g. linguist";
  nameLabel.appendChild(nameInput);
  form.appendChild(nameLabel);

  const roleLabel = el("label", undefined, "role");
  const roleSelect = el("select");
  for (const role of ["annotator", "expert"]) {
    const option = el("option", undefined, role);
    option.value = role;
    roleSelect.appendChild(option);
  }
  roleLabel.appendChild(roleSelect);
  form.appendChild(roleLabel);

  const urlLabel = el("label", undefined, "service base URL");
  const urlInput = el("input");
  urlInput.value = localStorage.getItem("ontoforge.baseUrl") ?? "";
  urlInput.placeholder = "empty = same origin";
  urlLabel.appendChild(urlInput);
  form.appendChild(urlLabel);

  form.appendChild(
    button("start", () => {
      const actor = nameInput.value.trim();
      if (!actor) {
        nameInput.focus();
        return;
      }
      localStorage.setItem("ontoforge.baseUrl", urlInput.value.trim());
      const session: Session = { actor, role: roleSelect.value as Role };
      const client = new ApiClient(urlInput.value.trim());
      startWorkspace(client, session);
    }),
  );
  app!.appendChild(form);
}

function startWorkspace(client: ApiClient, session: Session): void {
  clear(app!);
  const bar = el("div", "nav-bar");
  bar.appendChild(el("span", "who", `${session.actor} (${session.role})`));
  const viewRoot = el("div", "view-root");

  const show = (kind: "labeling" | "validation") => {
    active?.stop();
    clear(viewRoot);
    const view =
      kind === "labeling"
        ? new LabelingView(viewRoot, client, session)
        : new ValidationView(viewRoot, client, session);
    active = view;
    void view.start().catch((err) => {
      clear(viewRoot);
      viewRoot.appendChild(el("div", "error-banner", `failed to load: ${err}`));
    });
  };

  bar.appendChild(button("labeling", () => show("labeling")));
  bar.appendChild(button("validation", () => show("validation")));
  bar.appendChild(
    button("sign out", () => {
      active?.stop();
      active = null;
      startSessionForm();
    }),
  );
  app!.appendChild(bar);
  app!.appendChild(viewRoot);
  show(session.role === "expert" ? "validation" : "labeling");
}

startSessionForm();
