// Copyright 2026 The SSH-Passkeys Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal ceremony driver served by the challenge server. Reads the ticket
// token from the URL path, fetches options, calls the platform credential
// API and posts the encoded response back. Performs no cryptography.
(function () {
  "use strict";

  function b64urlToBuf(s) {
    if (/[^A-Za-z0-9_-]/.test(s) || s.length % 4 === 1) throw new Error("bad base64url");
    var b64 = s.replace(/-/g, "+").replace(/_/g, "/");
    while (b64.length % 4) b64 += "=";
    var bin = atob(b64);
    var out = new Uint8Array(bin.length);
    for (var i = 0; i < bin.length; i++) out[i] = bin.charCodeAt(i);
    return out.buffer;
  }

  function bufToB64url(buf) {
    var bytes = new Uint8Array(buf), bin = "";
    for (var i = 0; i < bytes.length; i++) bin += String.fromCharCode(bytes[i]);
    return btoa(bin).replace(/\+/g, "-").replace(/\//g, "_").replace(/=+$/, "");
  }

  var parts = location.pathname.split("/");
  var ceremony = parts[1] === "r" ? "reg" : "auth";
  var token = parts[2] || "";
  var button = document.getElementById("go");
  var status = document.getElementById("status");
  var busy = false;

  function show(text, cls) {
    status.textContent = text;
    status.className = cls || "";
  }

  function post(path, body) {
    return fetch(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body)
    }).then(function (res) {
      return res.json().catch(function () { return {}; }).then(function (doc) {
        if (!res.ok) throw new Error(doc.error || ("http-" + res.status));
        return doc;
      });
    }, function () { throw new Error("network"); });
  }

  function run() {
    if (busy) return;
    busy = true;
    button.disabled = true;
    show("Waiting for your passkey…");
    post("/api/" + ceremony + "/options", { token: token }).then(function (opts) {
      opts.challenge = b64urlToBuf(opts.challenge);
      if (ceremony === "reg") {
        opts.user.id = b64urlToBuf(opts.user.id);
        (opts.excludeCredentials || []).forEach(function (c) { c.id = b64urlToBuf(c.id); });
        return navigator.credentials.create({ publicKey: opts });
      }
      (opts.allowCredentials || []).forEach(function (c) { c.id = b64urlToBuf(c.id); });
      return navigator.credentials.get({ publicKey: opts });
    }).then(function (cred) {
      var r = cred.response;
      var response = { clientDataJSON: bufToB64url(r.clientDataJSON) };
      if (ceremony === "reg") {
        response.attestationObject = bufToB64url(r.attestationObject);
      } else {
        response.authenticatorData = bufToB64url(r.authenticatorData);
        response.signature = bufToB64url(r.signature);
        if (r.userHandle) response.userHandle = bufToB64url(r.userHandle);
      }
      return post("/api/" + ceremony + "/verify", {
        token: token,
        credential: { id: cred.id, rawId: bufToB64url(cred.rawId), type: cred.type, response: response }
      });
    }).then(function () {
      show(ceremony === "reg" ? "Passkey registered." : "Signed in. Return to your terminal.", "success");
    }, function (err) {
      var kind = err && err.name === "NotAllowedError" ? "user-cancelled" : (err && err.message) || "error";
      show("Failed: " + kind, "failure");
      busy = false;
      button.disabled = false;
    });
  }

  document.getElementById("title").textContent =
    ceremony === "reg" ? "Register an SSH passkey" : "SSH passkey sign-in";
  button.addEventListener("click", run);
  button.disabled = false;
})();
