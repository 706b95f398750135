/// <reference types="vitest/config" />
import { defineConfig } from "vite";

// Every API path is proxied so the dev server behaves like the built bundle
// served by the engine itself.
const API_PATHS = [
  "/health",
  "/sessions",
  "/search",
  "/favorites",
  "/mix",
  "/generations",
  "/modify",
  "/render",
  "/presets",
];

export default defineConfig({
  server: {
    proxy: Object.fromEntries(
      API_PATHS.map((p) => [p, { target: "http://127.0.0.1:8000", changeOrigin: true }]),
    ),
  },
  build: {
    outDir: "dist",
    emptyOutDir: true,
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
  },
});
