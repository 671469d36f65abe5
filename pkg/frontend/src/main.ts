import { Api } from "./api.js";
import { createApp } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");
// served by the catalogue service at /ui, so the API lives one level up
const api = new Api((url, init) => fetch(url, init), "..");
createApp(root, api).start();
