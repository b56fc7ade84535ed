import { ApiClient } from "./api.js";
import { mount } from "./ui.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("service") ?? "http://127.0.0.1:8000";

const root = document.getElementById("app");
if (root) {
  void mount(root, new ApiClient(baseUrl));
}
