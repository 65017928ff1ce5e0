// Catch2 v3 amalgamated translation unit; it supplies main().
// Individual test files include catch_amalgamated.hpp only.
