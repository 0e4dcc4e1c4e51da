#!/usr/bin/env python3
# Copyright 2026 The Halluspan Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Minimal OpenAI-compatible chat endpoint used to record the replay fixtures.

Serves the canned response from responses.json whose document summary
appears in the request. Usage: mock_server.py PORT
"""
import json
import sys
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

HERE = Path(__file__).resolve().parent
SUMMARIES = {json.loads(l)["id"]: json.loads(l)["summary"] for l in open(HERE / "corpus.jsonl", encoding="utf-8")}
RESPONSES = json.load(open(HERE / "responses.json", encoding="utf-8"))


class Handler(BaseHTTPRequestHandler):
    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        prompt = "\n".join(m["content"] for m in body["messages"])
        hits = [i for i, s in SUMMARIES.items() if s in prompt]
        if len(hits) != 1:
            self.send_response(400)
            self.end_headers()
            return
        reply = {"id": "mock-" + hits[0], "object": "chat.completion", "model": body.get("model", ""),
                 "choices": [{"index": 0, "finish_reason": "stop",
                              "message": {"role": "assistant", "content": RESPONSES[hits[0]]}}]}
        data = json.dumps(reply).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


if __name__ == "__main__":
    HTTPServer(("127.0.0.1", int(sys.argv[1])), Handler).serve_forever()
