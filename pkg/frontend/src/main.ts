import { AnnotationApp } from "./app.js";

const root = document.getElementById("app");
if (root) {
  void new AnnotationApp(root).start();
}
