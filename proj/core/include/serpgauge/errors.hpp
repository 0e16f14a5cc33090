#pragma once

#include <stdexcept>
#include <string>

namespace serpgauge {

// Base class for all errors raised by the harness.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or unsupported input (bad URL, bad config, bad query-set field).
class InputError : public Error {
public:
    using Error::Error;
};

// A fixture-mode lookup found no recorded entry.
class MissingFixtureError : public Error {
public:
    MissingFixtureError(std::string engine_id, std::string query_id)
        : Error("missing fixture: engine=" + engine_id + " query=" + query_id),
          engine_id(std::move(engine_id)),
          query_id(std::move(query_id)) {}

    std::string engine_id;
    std::string query_id;
};

// Network-level failure after all retries.
class TransportError : public Error {
public:
    using Error::Error;
};

// HTML payload could not be decoded into a document.
class SegmentationError : public Error {
public:
    SegmentationError(const std::string& url, const std::string& reason)
        : Error("segmentation failed for " + url + ": " + reason), url(url) {}

    std::string url;
};

}  // namespace serpgauge
