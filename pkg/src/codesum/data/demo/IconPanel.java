public class IconPanel {

    private IconSource source;
    private JLabel label;
    private Canvas canvas;
    private ImageIcon banner;
    private String bannerName;

    public void render() {
        label.setIcon(source.getIcon());
    }

    public void refresh() {
        label.setIcon(source.getIcon());
        label.repaint();
    }

    public void paintBanner() {
        canvas.draw(source.getIcon());
    }

    public void installImages() {
        banner = loadImage(bannerName);
    }

    public ImageIcon loadImage(String imageName) {
        return new ImageIcon(imageName);
    }
}
