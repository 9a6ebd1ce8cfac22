// Writes a deterministic synthetic boundary dataset in the bench layout.

#include <CLI11.hpp>

#include <iostream>

#include "edgekit/error.hpp"
#include "edgekit/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"edgekit-synth: generate a synthetic image + ground-truth dataset"};
    std::string root;
    std::size_t count = 12;
    std::uint64_t seed = 1;
    edgekit::synthetic::SceneParams params;
    app.add_option("root", root, "output dataset directory")->required();
    app.add_option("--count", count, "number of images")->capture_default_str();
    app.add_option("--seed", seed, "first scene seed")->capture_default_str();
    app.add_option("--width", params.width, "image width")->capture_default_str();
    app.add_option("--height", params.height, "image height")->capture_default_str();
    app.add_option("--annotators", params.annotators, "masks per image")->capture_default_str();
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    try {
        edgekit::synthetic::write_dataset(root, count, seed, params);
    } catch (const edgekit::Error& e) {
        std::cerr << "edgekit-synth: " << e.what() << '\n';
        return e.exit_code();
    }
    return 0;
}
